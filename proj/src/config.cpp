#include "randpv/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "randpv/errors.hpp"

namespace randpv {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw data_error("config: key '" + key + "': cannot parse number '" + s + "'");
    return v;
}

long long parse_int(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw data_error("config: key '" + key + "': cannot parse integer '" + s + "'");
    return v;
}

}  // namespace

std::string shortest_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::vector<SimulationSetting> parse_table_grid(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw data_error("config: line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw data_error("config: line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key)) throw data_error("config: duplicate key '" + key + "'");
        kv[key] = value;
    }

    SimulationSetting base;
    std::vector<int> gammas = {base.gamma};
    std::vector<double> pi0s = {base.pi0};
    std::vector<double> mu_mins = {base.mu_min};
    std::vector<double> mu_maxs = {base.mu_max};

    for (const auto& [key, value] : kv) {
        if (key == "m") base.m = static_cast<int>(parse_int(value, key));
        else if (key == "s") base.s = static_cast<int>(parse_int(value, key));
        else if (key == "n") base.n = static_cast<int>(parse_int(value, key));
        else if (key == "reps") base.reps = static_cast<int>(parse_int(value, key));
        else if (key == "seed") base.seed = static_cast<std::uint64_t>(parse_int(value, key));
        else if (key == "lambda") base.lambda = parse_double(value, key);
        else if (key == "p0") base.p0 = parse_double(value, key);
        else if (key == "p1") base.p1 = parse_double(value, key);
        else if (key == "model") {
            if (value == "z") base.model = MarginalModelKind::z_known_unit_variance;
            else if (value == "t") base.model = MarginalModelKind::t_unknown_variance;
            else throw data_error("config: model must be 'z' or 't', got '" + value + "'");
        } else if (key == "kinds") {
            base.kinds.clear();
            for (const auto& item : split_list(value)) base.kinds.push_back(parse_kind(item));
        } else if (key == "gamma") {
            gammas.clear();
            for (const auto& item : split_list(value))
                gammas.push_back(static_cast<int>(parse_int(item, key)));
        } else if (key == "pi0") {
            pi0s.clear();
            for (const auto& item : split_list(value)) pi0s.push_back(parse_double(item, key));
        } else if (key == "mu_min") {
            mu_mins.clear();
            for (const auto& item : split_list(value)) mu_mins.push_back(parse_double(item, key));
        } else if (key == "mu_max") {
            mu_maxs.clear();
            for (const auto& item : split_list(value)) mu_maxs.push_back(parse_double(item, key));
        } else {
            throw data_error("config: unknown key '" + key + "'");
        }
    }

    if (mu_mins.size() != mu_maxs.size())
        throw data_error("config: mu_min and mu_max lists must have equal length");
    if (gammas.empty() || pi0s.empty() || mu_mins.empty())
        throw data_error("config: empty grid axis");

    std::vector<SimulationSetting> grid;
    grid.reserve(gammas.size() * mu_mins.size() * pi0s.size());
    for (int gamma : gammas)
        for (std::size_t mu = 0; mu < mu_mins.size(); ++mu)
            for (double pi0 : pi0s) {
                SimulationSetting setting = base;
                setting.gamma = gamma;
                setting.mu_min = mu_mins[mu];
                setting.mu_max = mu_maxs[mu];
                setting.pi0 = pi0;
                setting.validate();
                grid.push_back(std::move(setting));
            }
    return grid;
}

std::vector<SimulationSetting> load_table_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_table_grid(buffer.str());
}

}  // namespace randpv
