#include "lcl/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "lcl/errors.hpp"

namespace lcl {

void Manifest::write(const std::string& path) const {
    nlohmann::json j;
    j["tool"] = "lcl";
    j["version"] = version;
    j["format"] = format;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["config_sha256"] = config_sha256;
    j["config_text"] = config_text;
    j["threads"] = threads;
    j["wall_seconds"] = wall_seconds;
    j["outputs"] = nlohmann::json::array();
    for (const auto& e : outputs)
        j["outputs"].push_back({{"path", e.path}, {"sha256", e.sha256}});
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoFailure("cannot write manifest: " + path);
    os << j.dump(2) << "\n";
}

Manifest Manifest::read(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoFailure("cannot open manifest: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw IoFailure(std::string("malformed manifest: ") + e.what());
    }
    Manifest m;
    m.version = j.at("version").get<std::string>();
    m.format = j.at("format").get<unsigned>();
    m.scenario = j.at("scenario").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_sha256 = j.at("config_sha256").get<std::string>();
    m.config_text = j.at("config_text").get<std::string>();
    m.threads = j.value("threads", 1u);
    m.wall_seconds = j.value("wall_seconds", 0.0);
    for (const auto& e : j.at("outputs"))
        m.outputs.push_back(
            {e.at("path").get<std::string>(), e.at("sha256").get<std::string>()});
    return m;
}

}  // namespace lcl
