#include "prompts/templates.hpp"

#include <cctype>

#include "common/error.hpp"
#include "common/fsio.hpp"

namespace ca::prompts {

const char* template_file_name(TemplateId id) {
    switch (id) {
        case TemplateId::ExplainInstruction: return "explain_instruction.txt";
        case TemplateId::MktExplain: return "explain_market_factor.txt";
        case TemplateId::NewsExplain: return "explain_news.txt";
        case TemplateId::CryptoExplain: return "explain_crypto.txt";
        case TemplateId::VisionExplain: return "explain_vision.txt";
        case TemplateId::FineTuneInstruction: return "finetune_instruction.txt";
        case TemplateId::FineTuneUser: return "finetune_user.txt";
        case TemplateId::PredictInstruction: return "predict_instruction.txt";
        case TemplateId::PredictUser: return "predict_user.txt";
        case TemplateId::InterteamContext: return "interteam_context.txt";
        case TemplateId::JudgeRubric: return "judge_rubric.txt";
    }
    throw Error(ErrorKind::Input, "unknown template id");
}

namespace {

bool slot_char(char c) {
    return (c >= 'a' && c <= 'z') || c == '_';
}

}  // namespace

std::string render_text(const std::string& body, const SlotMap& slots) {
    std::string out;
    out.reserve(body.size());
    size_t i = 0;
    while (i < body.size()) {
        char c = body[i];
        if (c != '{') {
            out.push_back(c);
            ++i;
            continue;
        }
        size_t j = i + 1;
        while (j < body.size() && slot_char(body[j])) ++j;
        if (j > i + 1 && j < body.size() && body[j] == '}') {
            std::string name = body.substr(i + 1, j - i - 1);
            auto it = slots.find(name);
            if (it == slots.end()) {
                throw Error(ErrorKind::Input, "missing slot '" + name + "'");
            }
            out += it->second;
            i = j + 1;
        } else {
            out.push_back(c);  // literal brace, not a slot marker
            ++i;
        }
    }
    return out;
}

TemplateStore::TemplateStore(std::string dir) : dir_(std::move(dir)) {}

const std::string& TemplateStore::body(TemplateId id) const {
    auto it = cache_.find(id);
    if (it != cache_.end()) return it->second;
    std::string text = fsio::read_text(dir_ + "/" + template_file_name(id));
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return cache_.emplace(id, std::move(text)).first->second;
}

std::string TemplateStore::render(TemplateId id, const SlotMap& slots) const {
    return render_text(body(id), slots);
}

}  // namespace ca::prompts
