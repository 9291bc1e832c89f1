#pragma once

#include <map>
#include <string>

namespace ca::prompts {

// Prompt bodies live as versioned text fixtures under templates/ so parity
// with the published wording can be audited without reading code. The nine
// *Instruction/*Explain/Predict* ids are fixed text; InterteamContext and
// JudgeRubric are engine-defined.
enum class TemplateId {
    ExplainInstruction,
    MktExplain,
    NewsExplain,
    CryptoExplain,
    VisionExplain,
    FineTuneInstruction,
    FineTuneUser,
    PredictInstruction,
    PredictUser,
    InterteamContext,
    JudgeRubric,
};

const char* template_file_name(TemplateId id);

using SlotMap = std::map<std::string, std::string>;

// Single-pass `{slot}` substitution. Every marker in the body must be present
// in the map; slot values are inserted verbatim (never re-scanned).
std::string render_text(const std::string& body, const SlotMap& slots);

class TemplateStore {
public:
    explicit TemplateStore(std::string dir);

    // Template body with the file's single trailing newline stripped.
    const std::string& body(TemplateId id) const;
    std::string render(TemplateId id, const SlotMap& slots) const;

private:
    std::string dir_;
    mutable std::map<TemplateId, std::string> cache_;
};

}  // namespace ca::prompts
