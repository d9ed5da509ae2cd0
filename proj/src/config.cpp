#include "bridgelab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

#include "bridgelab/csv.hpp"
#include "bridgelab/errors.hpp"

namespace bridgelab {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

double to_number(const std::string& key, const std::string& text) {
    try {
        return csv::parse_double(text);
    } catch (const std::invalid_argument&) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end)
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string item(trim(std::string_view(text).substr(
            start, comma == std::string::npos ? std::string::npos : comma - start)));
        out.push_back(to_number(key, item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += csv::format_double(values[i]);
    }
    return out;
}

KeyValues split_lines(std::string_view source) {
    KeyValues kv;
    std::size_t line_no = 0;
    while (!source.empty()) {
        const std::size_t nl = source.find('\n');
        std::string_view line = source.substr(0, nl);
        source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
        if (kv.count(key)) throw ConfigError(key, "duplicate key");
        kv[key] = std::string(trim(line.substr(eq + 1)));
    }
    return kv;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "drift.family", "drift.beta", "drift.scale", "drift.table", "sweep.beta",
        "scheme", "T", "h", "n_paths", "seed", "outputs",
        "localtime.x", "localtime.estimator", "localtime.eps", "localtime.delta",
        "localtime.eps_ladder", "localtime.checkpoints",
        "holder.scales", "holder.R", "holder.levels",
        "law.times",
    };
    return keys;
}

}  // namespace

std::vector<DriftSpec> ExperimentConfig::drift_variants() const {
    std::vector<DriftSpec> out{drift};
    for (double beta : beta_sweep) {
        DriftSpec d = drift;
        d.beta = beta;
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    }
    return out;
}

std::string default_output_dir() {
    const char* env = std::getenv(kOutputDirEnv);
    return env && *env ? std::string(env) : std::string(kDefaultOutputDir);
}

void validate_config(const ExperimentConfig& c) {
    try {
        c.drift.validate();
    } catch (const DomainError& e) {
        throw ConfigError("drift", e.what());
    }
    if (!(c.h > 0.0)) throw ConfigError("h", "must be > 0");
    if (!(c.T >= c.h)) throw ConfigError("T", "must be >= h");
    if (c.n_paths < 1) throw ConfigError("n_paths", "must be >= 1");
    if (c.outputs.empty()) throw ConfigError("outputs", "must not be empty");
    for (double beta : c.beta_sweep) {
        DriftSpec d = c.drift;
        d.beta = beta;
        try {
            d.validate();
        } catch (const DomainError& e) {
            throw ConfigError("sweep.beta", e.what());
        }
    }
    const auto& lt = c.localtime;
    if (!(lt.eps >= 0.0)) throw ConfigError("localtime.eps", "must be >= 0");
    if (!(lt.delta > 0.0)) throw ConfigError("localtime.delta", "must be > 0");
    for (std::size_t i = 0; i < lt.eps_ladder.size(); ++i) {
        if (!(lt.eps_ladder[i] > 0.0)) throw ConfigError("localtime.eps_ladder", "entries must be > 0");
        if (i && !(lt.eps_ladder[i] < lt.eps_ladder[i - 1]))
            throw ConfigError("localtime.eps_ladder", "must be strictly decreasing");
    }
    for (std::size_t i = 0; i < lt.checkpoints.size(); ++i) {
        if (!(lt.checkpoints[i] >= 0.0 && lt.checkpoints[i] <= c.T))
            throw ConfigError("localtime.checkpoints", "entries must lie in [0, T]");
        if (i && !(lt.checkpoints[i] > lt.checkpoints[i - 1]))
            throw ConfigError("localtime.checkpoints", "must be strictly increasing");
    }
    for (double s : c.holder.scales)
        if (!(s > 0.0)) throw ConfigError("holder.scales", "entries must be > 0");
    if (!(c.holder.R > 0.0)) throw ConfigError("holder.R", "must be > 0");
    if (c.holder.levels < 3) throw ConfigError("holder.levels", "must be >= 3");
    for (std::size_t i = 0; i < c.law.times.size(); ++i) {
        if (!(c.law.times[i] > 0.0)) throw ConfigError("law.times", "entries must be > 0");
        if (i && !(c.law.times[i] > c.law.times[i - 1]))
            throw ConfigError("law.times", "must be strictly increasing");
    }
}

ExperimentConfig parse_config(std::string_view source) {
    const KeyValues kv = split_lines(source);
    for (const auto& [key, value] : kv)
        if (!known_keys().count(key)) throw ConfigError(key, "unknown key");
    for (const char* key : {"T", "h"})
        if (!kv.count(key)) throw ConfigError(key, "missing required key");

    ExperimentConfig c;
    try {
        c.drift = read_drift_fragment(kv);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const std::size_t colon = msg.find(':');
        throw ConfigError(msg.substr(0, colon), colon == std::string::npos ? msg : msg.substr(colon + 2));
    }

    const auto with = [&kv](const char* key, const std::function<void(const std::string&)>& apply) {
        if (auto it = kv.find(key); it != kv.end()) apply(it->second);
    };
    with("sweep.beta", [&](const std::string& v) { c.beta_sweep = to_list("sweep.beta", v); });
    with("scheme", [&](const std::string& v) {
        try {
            c.scheme = scheme_from_string(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("scheme", e.what());
        }
    });
    c.T = to_number("T", kv.at("T"));
    c.h = to_number("h", kv.at("h"));
    with("n_paths", [&](const std::string& v) { c.n_paths = to_unsigned("n_paths", v); });
    with("seed", [&](const std::string& v) { c.seed = to_unsigned("seed", v); });
    c.outputs = default_output_dir();
    with("outputs", [&](const std::string& v) { c.outputs = v; });

    with("localtime.x", [&](const std::string& v) { c.localtime.x = to_number("localtime.x", v); });
    with("localtime.estimator", [&](const std::string& v) {
        try {
            c.localtime.estimator = estimator_from_string(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("localtime.estimator", e.what());
        }
    });
    with("localtime.eps", [&](const std::string& v) { c.localtime.eps = to_number("localtime.eps", v); });
    with("localtime.delta", [&](const std::string& v) { c.localtime.delta = to_number("localtime.delta", v); });
    with("localtime.eps_ladder", [&](const std::string& v) {
        c.localtime.eps_ladder = to_list("localtime.eps_ladder", v);
    });
    with("localtime.checkpoints", [&](const std::string& v) {
        c.localtime.checkpoints = to_list("localtime.checkpoints", v);
    });
    with("holder.scales", [&](const std::string& v) { c.holder.scales = to_list("holder.scales", v); });
    with("holder.R", [&](const std::string& v) { c.holder.R = to_number("holder.R", v); });
    with("holder.levels", [&](const std::string& v) { c.holder.levels = to_unsigned("holder.levels", v); });
    with("law.times", [&](const std::string& v) { c.law.times = to_list("law.times", v); });

    validate_config(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(csv::read_text_file(path));
}

std::string serialize_config(const ExperimentConfig& c) {
    KeyValues drift;
    write_drift_fragment(c.drift, drift);
    std::string out;
    const auto line = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    for (const char* key : {"drift.family", "drift.beta", "drift.scale", "drift.table"})
        if (auto it = drift.find(key); it != drift.end()) line(key, it->second);
    line("sweep.beta", join(c.beta_sweep));
    line("scheme", to_string(c.scheme));
    line("T", csv::format_double(c.T));
    line("h", csv::format_double(c.h));
    line("n_paths", std::to_string(c.n_paths));
    line("seed", std::to_string(c.seed));
    line("outputs", c.outputs);
    line("localtime.x", csv::format_double(c.localtime.x));
    line("localtime.estimator", to_string(c.localtime.estimator));
    line("localtime.eps", csv::format_double(c.localtime.eps));
    line("localtime.delta", csv::format_double(c.localtime.delta));
    line("localtime.eps_ladder", join(c.localtime.eps_ladder));
    line("localtime.checkpoints", join(c.localtime.checkpoints));
    line("holder.scales", join(c.holder.scales));
    line("holder.R", csv::format_double(c.holder.R));
    line("holder.levels", std::to_string(c.holder.levels));
    line("law.times", join(c.law.times));
    return out;
}

std::string config_digest(const ExperimentConfig& c) {
    ExperimentConfig keyed = c;
    keyed.outputs = "-";
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(keyed)) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, hash >>= 4) out[static_cast<std::size_t>(i)] = hex[hash & 0xf];
    return out;
}

}  // namespace bridgelab
