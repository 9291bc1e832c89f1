#pragma once

#include <string>

#include "common/error.hpp"

namespace ca {

// The four data-modality experts plus the training-time explainer and the
// evaluation judge.
enum class RoleId { CryptoFactor, Technical, MarketFactor, News, Explainer, Judge };

inline const char* role_name(RoleId r) {
    switch (r) {
        case RoleId::CryptoFactor: return "crypto-factor";
        case RoleId::Technical: return "technical";
        case RoleId::MarketFactor: return "market-factor";
        case RoleId::News: return "news";
        case RoleId::Explainer: return "explainer";
        case RoleId::Judge: return "judge";
    }
    return "unknown";
}

inline RoleId role_from_name(const std::string& s) {
    for (RoleId r : {RoleId::CryptoFactor, RoleId::Technical, RoleId::MarketFactor, RoleId::News,
                     RoleId::Explainer, RoleId::Judge}) {
        if (s == role_name(r)) return r;
    }
    throw Error(ErrorKind::Parse, "unknown role '" + s + "'");
}

// Market-team roles predict the market trend; crypto-team roles predict an
// individual asset's price trend.
inline bool is_market_role(RoleId r) { return r == RoleId::MarketFactor || r == RoleId::News; }

constexpr const char* kMarketSubject = "MARKET";

}  // namespace ca
