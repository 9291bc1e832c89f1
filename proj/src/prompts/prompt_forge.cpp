#include "prompts/prompt_forge.hpp"

#include <algorithm>

#include "common/fsio.hpp"

namespace ca::prompts {

using nlohmann::json;

void to_json(json& j, const Provenance& p) {
    j = {{"source", p.source}, {"subject", p.subject}, {"min_week", p.min_week},
         {"max_week", p.max_week}};
}

void from_json(const json& j, Provenance& p) {
    p.source = j.at("source").get<std::string>();
    p.subject = j.at("subject").get<std::string>();
    p.min_week = j.at("min_week").get<long>();
    p.max_week = j.at("max_week").get<long>();
}

TargetPhrases target_phrases(bool market) {
    if (market) {
        return {"market trend", "market trend", "Market trend", "market"};
    }
    return {"price trend of a cryptocurrency", "price trend", "Price trend", "cryptocurrency"};
}

namespace {

template <typename Vector, typename Fields>
std::string fields_to_lines(const Vector& v, const Fields& fields,
                            const std::map<std::string, QuintileLabel>& labels) {
    std::string out;
    for (const auto& [name, member] : fields) {
        if (!out.empty()) out.push_back('\n');
        out += name;
        out += ": ";
        if (v.*member) {
            auto it = labels.find(name);
            if (it == labels.end()) {
                throw Error(ErrorKind::Input,
                            std::string("no quintile label for present factor '") + name + "'");
            }
            out += quintile_text(it->second);
        } else {
            out += "N/A";
        }
    }
    return out;
}

}  // namespace

std::string factors_to_text(const factors::CryptoFactorVector& v,
                            const std::map<std::string, QuintileLabel>& labels) {
    return fields_to_lines(v, factors::crypto_field_order(), labels);
}

std::string factors_to_text(const factors::MarketFactorVector& v,
                            const std::map<std::string, QuintileLabel>& labels) {
    return fields_to_lines(v, factors::market_field_order(), labels);
}

std::string news_to_text(const std::vector<md::NewsHeadline>& headlines, std::size_t cap) {
    std::vector<const md::NewsHeadline*> sorted;
    sorted.reserve(headlines.size());
    for (const auto& h : headlines) sorted.push_back(&h);
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
        if (a->published_at != b->published_at) return a->published_at < b->published_at;
        return a->title < b->title;
    });
    if (sorted.size() > cap) {
        sorted.erase(sorted.begin(), sorted.end() - static_cast<long>(cap));
    }
    std::string out;
    for (const auto* h : sorted) {
        if (!out.empty()) out.push_back('\n');
        out += "- [" + h->published_at + "] " + h->title;
    }
    return out;
}

std::string load_literature(const std::string& literature_root, RoleId expert) {
    std::string dir = literature_root + "/" + role_name(expert);
    auto files = fsio::list_files(dir);
    if (files.empty()) {
        throw Error(ErrorKind::Config,
                    std::string("no literature for modality '") + role_name(expert) + "' under " + dir);
    }
    std::string out;
    for (const auto& f : files) {
        if (!out.empty()) out += "\n\n---\n\n";
        std::string text = fsio::read_text(f);
        while (!text.empty() && text.back() == '\n') text.pop_back();
        out += text;
    }
    return out;
}

RenderedPrompt build_predict_prompt(const TemplateStore& store, RoleId role,
                                    const std::string& subject, const std::string& information,
                                    bool is_chart, std::vector<Provenance> provenance) {
    TargetPhrases t = target_phrases(is_market_role(role));
    RenderedPrompt p;
    p.system = store.render(TemplateId::PredictInstruction,
                            {{"target", t.target},
                             {"target_title", t.target_title},
                             {"target_short", t.target_short}});
    p.user = store.render(TemplateId::PredictUser, {{"subject_kind", t.subject_kind},
                                                    {"target", t.target},
                                                    {"information", information}});
    if (is_chart) p.image_ref = information;
    p.provenance = std::move(provenance);
    return p;
}

const char* modality_name(Modality m) {
    switch (m) {
        case Modality::Factors: return "factors";
        case Modality::News: return "news";
        case Modality::Chart: return "chart";
    }
    return "unknown";
}

RoleId expert_for(const TrainingExample& example) {
    switch (example.modality) {
        case Modality::Chart: return RoleId::Technical;
        case Modality::News: return RoleId::News;
        case Modality::Factors:
            return example.subject == kMarketSubject ? RoleId::MarketFactor : RoleId::CryptoFactor;
    }
    throw Error(ErrorKind::Input, "unknown modality");
}

RenderedPrompt build_explain_prompt(const TemplateStore& store, const TrainingExample& example,
                                    const std::string& literature) {
    RoleId expert = expert_for(example);
    TargetPhrases t = target_phrases(is_market_role(expert));
    RenderedPrompt p;
    p.system = store.render(TemplateId::ExplainInstruction, {{"target", t.target_short}});

    const std::string trend = trend_text(example.ground_truth);
    switch (expert) {
        case RoleId::MarketFactor:
            p.user = store.render(TemplateId::MktExplain, {{"target", t.target_short},
                                                           {"literature", literature},
                                                           {"information", example.info_text},
                                                           {"trend", trend}});
            break;
        case RoleId::News:
            p.user = store.render(TemplateId::NewsExplain, {{"target", t.target_short},
                                                            {"literature", literature},
                                                            {"information", example.info_text},
                                                            {"trend", trend}});
            break;
        case RoleId::CryptoFactor:
            p.user = store.render(TemplateId::CryptoExplain, {{"crypto", example.subject},
                                                              {"literature", literature},
                                                              {"information", example.info_text},
                                                              {"trend", trend}});
            break;
        case RoleId::Technical:
            p.user = store.render(TemplateId::VisionExplain, {{"crypto", example.subject},
                                                              {"literature", literature},
                                                              {"trend", trend}});
            p.image_ref = example.image_ref;
            break;
        default:
            throw Error(ErrorKind::Input, "no explain prompt for this role");
    }

    p.provenance = example.provenance;
    p.provenance.push_back({"literature", role_name(expert), 0, 0});
    p.provenance.push_back(
        {"ground_truth", example.subject, example.week_index + 1, example.week_index + 1});
    return p;
}

json to_json(const FineTuneRecord& record) {
    json messages = json::array();
    for (const auto& m : record.messages) {
        json msg = {{"role", m.role}, {"content", m.content}};
        if (m.image_url) msg["image_url"] = *m.image_url;
        messages.push_back(std::move(msg));
    }
    return json{{"messages", std::move(messages)}};
}

FineTuneRecord finetune_record_from_json(const json& j) {
    FineTuneRecord record;
    for (const auto& msg : j.at("messages")) {
        ChatMessage m;
        m.role = msg.at("role").get<std::string>();
        m.content = msg.at("content").get<std::string>();
        if (msg.contains("image_url")) m.image_url = msg.at("image_url").get<std::string>();
        record.messages.push_back(std::move(m));
    }
    return record;
}

FineTuneRecord build_finetune_record(const TemplateStore& store, const TrainingExample& example) {
    if (example.explanation.empty()) {
        throw Error(ErrorKind::Input, "training example for " + example.subject + " week " +
                                          std::to_string(example.week_index) +
                                          " has no explanation");
    }
    RoleId expert = expert_for(example);
    TargetPhrases t = target_phrases(is_market_role(expert));

    FineTuneRecord record;
    record.messages.push_back(
        {"system",
         store.render(TemplateId::FineTuneInstruction, {{"target", t.target},
                                                        {"target_title", t.target_title},
                                                        {"target_short", t.target_short}}),
         std::nullopt});

    bool chart = example.modality == Modality::Chart;
    std::string crypto =
        example.subject == kMarketSubject ? "the cryptocurrency market" : example.subject;
    std::string info = chart ? example.image_ref : example.info_text;
    ChatMessage user{"user",
                     store.render(TemplateId::FineTuneUser, {{"crypto", crypto},
                                                             {"target_short", t.target_short},
                                                             {"info", info}}),
                     std::nullopt};
    if (chart) user.image_url = example.image_ref;
    record.messages.push_back(std::move(user));

    record.messages.push_back({"assistant",
                               t.target_title + ": " + trend_text(example.ground_truth) +
                                   "\nExplanation: " + example.explanation,
                               std::nullopt});
    return record;
}

std::string export_finetune_dataset(const TemplateStore& store, const std::string& out_dir,
                                    const std::vector<TrainingExample>& examples, RoleId expert) {
    std::string body;
    size_t count = 0;
    for (const auto& example : examples) {
        if (expert_for(example) != expert) continue;
        body += to_json(build_finetune_record(store, example)).dump();
        body.push_back('\n');
        ++count;
    }
    if (count == 0) {
        throw Error(ErrorKind::Input,
                    std::string("no training records for expert '") + role_name(expert) + "'");
    }
    std::string path = out_dir + "/" + role_name(expert) + ".jsonl";
    fsio::write_text(path, body);
    return path;
}

std::vector<FineTuneRecord> parse_finetune_file(const std::string& path) {
    std::vector<FineTuneRecord> out;
    for (const auto& line : fsio::read_lines(path)) {
        if (line.empty()) continue;
        out.push_back(finetune_record_from_json(json::parse(line)));
    }
    return out;
}

}  // namespace ca::prompts
