#include "taskmatch/io/scenario_json.hpp"

#include <fstream>
#include <string>

namespace taskmatch {

using nlohmann::json;

json scenario_to_json(const Scenario& scenario) {
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["classes"] = scenario.classes;
    doc["lambda"] = scenario.lambda;
    json servers = json::array();
    for (ServerId s = 0; s < scenario.num_servers(); ++s) {
        const auto row = scenario.skills.row(s);
        servers.push_back({{"label", scenario.servers[s]},
                           {"mu", scenario.skills.mu(s)},
                           {"skills", std::vector<double>(row.begin(), row.end())}});
    }
    doc["servers"] = std::move(servers);
    json priors = json::array();
    for (const auto& prior : scenario.priors) {
        const auto w = prior.type.weights();
        priors.push_back(
            {{"weights", std::vector<double>(w.begin(), w.end())}, {"prob", prior.prob}});
    }
    doc["priors"] = std::move(priors);
    if (scenario.feedback) {
        const FeedbackModel& fb = *scenario.feedback;
        json beta = json::array();
        for (ServerId s = 0; s < fb.num_servers(); ++s) {
            json per_class = json::array();
            for (ClassId c = 0; c < fb.num_classes(); ++c) {
                const auto pmf = fb.pmf(s, c);
                per_class.push_back(std::vector<double>(pmf.begin(), pmf.end()));
            }
            beta.push_back(std::move(per_class));
        }
        doc["feedback"] = {{"symbols", fb.symbols()}, {"beta", std::move(beta)}};
    }
    return doc;
}

namespace {

const json& field(const json& obj, const char* name, const std::string& where) {
    if (!obj.is_object() || !obj.contains(name)) {
        throw FormatError(where + ": missing field '" + name + "'");
    }
    return obj.at(name);
}

template <typename T>
T as(const json& value, const std::string& where) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw FormatError(where + ": unexpected value " + value.dump());
    }
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    const int version = as<int>(field(doc, "format_version", "scenario"), "format_version");
    if (version != kFormatVersion) {
        throw FormatError("unsupported format_version " + std::to_string(version));
    }
    Scenario sc;
    sc.classes = as<std::vector<std::string>>(field(doc, "classes", "scenario"), "classes");
    sc.lambda = as<double>(field(doc, "lambda", "scenario"), "lambda");
    const json& servers = field(doc, "servers", "scenario");
    if (!servers.is_array()) {
        throw FormatError("servers: expected an array");
    }
    std::vector<std::vector<double>> p;
    std::vector<double> mu;
    for (std::size_t i = 0; i < servers.size(); ++i) {
        const std::string where = "servers[" + std::to_string(i) + "]";
        const json& s = servers[i];
        sc.servers.push_back(as<std::string>(field(s, "label", where), where + ".label"));
        mu.push_back(as<double>(field(s, "mu", where), where + ".mu"));
        p.push_back(as<std::vector<double>>(field(s, "skills", where), where + ".skills"));
    }
    sc.skills = SkillMatrix(std::move(p), std::move(mu));
    const json& priors = field(doc, "priors", "scenario");
    if (!priors.is_array()) {
        throw FormatError("priors: expected an array");
    }
    for (std::size_t i = 0; i < priors.size(); ++i) {
        const std::string where = "priors[" + std::to_string(i) + "]";
        sc.priors.push_back(
            {MixedType(as<std::vector<double>>(field(priors[i], "weights", where),
                                               where + ".weights")),
             as<double>(field(priors[i], "prob", where), where + ".prob")});
    }
    if (doc.contains("feedback") && !doc.at("feedback").is_null()) {
        const json& fb = doc.at("feedback");
        auto symbols = as<std::vector<std::string>>(field(fb, "symbols", "feedback"),
                                                    "feedback.symbols");
        const auto beta = as<std::vector<std::vector<std::vector<double>>>>(
            field(fb, "beta", "feedback"), "feedback.beta");
        std::vector<double> flat;
        for (const auto& per_class : beta) {
            if (per_class.size() != sc.classes.size()) {
                throw FormatError("feedback.beta: expected one row per class");
            }
            for (const auto& pmf : per_class) {
                if (pmf.size() != symbols.size()) {
                    throw FormatError("feedback.beta: expected one entry per symbol");
                }
                flat.insert(flat.end(), pmf.begin(), pmf.end());
            }
        }
        sc.feedback = FeedbackModel(std::move(symbols), beta.size(), sc.classes.size(),
                                    std::move(flat));
    }
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return scenario_from_json(doc);
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << scenario_to_json(scenario).dump(2) << '\n';
}

}  // namespace taskmatch
