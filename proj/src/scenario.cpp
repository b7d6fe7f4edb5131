#include "caia/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace caia {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ScenarioError("scenario key " + key + ": not an integer: " + value);
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ScenarioError("scenario key " + key + ": not a number: " + value);
    }
}

std::uint64_t parse_seed(const std::string& value) {
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ScenarioError("scenario key seed: not an unsigned integer: " + value);
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& item : split_commas(value)) out.push_back(parse_double(key, item));
    if (out.empty()) throw ScenarioError("scenario key " + key + ": empty list");
    return out;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
    Scenario s;
    int K = -1, N = -1;
    std::map<int, std::vector<int>> demands;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("scenario line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw ScenarioError("scenario key " + key + ": empty value");

        if (key == "K") {
            K = parse_int(key, value);
        } else if (key == "N") {
            N = parse_int(key, value);
        } else if (key.size() > 1 && key[0] == 'S') {
            const int j = parse_int(key, key.substr(1));
            std::vector<int> set;
            for (const auto& item : split_commas(value)) set.push_back(parse_int(key, item));
            if (!demands.emplace(j, std::move(set)).second)
                throw ScenarioError("scenario key " + key + " repeated");
        } else if (key == "n") {
            s.n = parse_int(key, value);
            if (s.n < 1) throw ScenarioError("scenario key n: must be >= 1");
        } else if (key == "seed") {
            s.seed = parse_seed(value);
        } else if (key == "gmin") {
            s.bounds.gmin = parse_double(key, value);
        } else if (key == "gmax") {
            s.bounds.gmax = parse_double(key, value);
        } else if (key == "distinct_values") {
            s.distinct_values = parse_int(key, value);
            if (s.distinct_values < 1)
                throw ScenarioError("scenario key distinct_values: must be >= 1");
        } else if (key == "T_target") {
            s.t_target = parse_double_list(key, value);
        } else if (key == "snr_db") {
            s.snr_db = parse_double_list(key, value);
        } else if (key == "stream") {
            s.stream_path = value;
        } else if (key == "match_eps") {
            s.match_eps = parse_double_list(key, value);
        } else if (key == "match_budget") {
            s.match_budget = parse_int(key, value);
            if (s.match_budget < 1) throw ScenarioError("scenario key match_budget: must be >= 1");
        } else if (key == "out") {
            s.out_dir = value;
        } else {
            throw ScenarioError("scenario line " + std::to_string(lineno) + ": unknown key " + key);
        }
    }

    if (K < 0) throw ScenarioError("scenario missing K");
    if (N < 0) throw ScenarioError("scenario missing N");
    std::vector<std::vector<int>> ordered;
    for (int j = 1; j <= N; ++j) {
        auto it = demands.find(j);
        if (it == demands.end())
            throw ScenarioError("scenario missing S" + std::to_string(j));
        ordered.push_back(it->second);
    }
    if (static_cast<int>(demands.size()) != N)
        throw ScenarioError("scenario has demand sets beyond N receivers");
    if (!(s.bounds.gmin > 0) || !(s.bounds.gmin <= s.bounds.gmax))
        throw ScenarioError("scenario bounds must satisfy 0 < gmin <= gmax");
    try {
        s.network = make_network(K, ordered);
    } catch (const NetworkError& e) {
        throw ScenarioError(std::string("scenario network invalid: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario " + path);
    return parse_scenario(in);
}

}  // namespace caia
