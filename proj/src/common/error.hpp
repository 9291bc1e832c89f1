#pragma once

#include <stdexcept>
#include <string>

namespace ca {

enum class ErrorKind {
    Config,     // bad configuration or CLI usage
    Input,      // caller violated a precondition
    Ingestion,  // provider data failed schema/invariant checks
    Parse,      // unparseable model output or file content
    Network,    // transport failure (retryable)
    Provider,   // provider rejected the request
    Data,       // missing data that upstream must resolve
    State,      // inconsistent persisted state
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    bool retryable() const { return kind_ == ErrorKind::Network; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Config: return "config";
        case ErrorKind::Input: return "input";
        case ErrorKind::Ingestion: return "ingestion";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Network: return "network";
        case ErrorKind::Provider: return "provider";
        case ErrorKind::Data: return "data";
        case ErrorKind::State: return "state";
    }
    return "unknown";
}

}  // namespace ca
