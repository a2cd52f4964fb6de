// config.cpp - TOML-syntax scenario config parser. Supports the subset
// the schema needs: tables, dotted keys, strings, numbers, booleans,
// one-level arrays, and comments. Every diagnostic carries a line
// number and all problems are reported in one pass.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#include "ubinc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ubinc {

namespace {

struct RawValue {
    enum class Kind { boolean, number, string, number_array, string_array, empty_array };
    Kind kind = Kind::number;
    bool b = false;
    double num = 0.0;
    bool is_int = false;
    std::string str;
    std::vector<double> nums;
    std::vector<std::string> strs;
    int line = 0;
};

struct Doc {
    std::map<std::string, RawValue> items;  // dotted path -> value
    std::map<std::string, int> tables;      // dotted path -> header line
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw config_error("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool bare_key(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-';
    });
}

std::string strip_comment(const std::string& line, int lineno) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    if (in_string) fail(lineno, "unterminated string");
    return line;
}

int bracket_depth(const std::string& s) {
    bool in_string = false;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            --depth;
        }
    }
    return depth;
}

std::string parse_basic_string(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') {
        fail(line, "cannot parse string '" + s + "'");
    }
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        char c = s[i];
        if (c != '\\') {
            if (c == '"') fail(line, "unexpected text after string");
            out += c;
            continue;
        }
        if (i + 2 >= s.size()) fail(line, "dangling escape in string");
        char e = s[++i];
        switch (e) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            default: fail(line, std::string("unsupported escape '\\") + e + "'");
        }
    }
    return out;
}

RawValue parse_scalar(const std::string& raw, int line) {
    RawValue v;
    v.line = line;
    std::string s = trim(raw);
    if (s.empty()) fail(line, "missing value");
    if (s.front() == '"') {
        v.kind = RawValue::Kind::string;
        v.str = parse_basic_string(s, line);
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = RawValue::Kind::boolean;
        v.b = s == "true";
        return v;
    }
    if (s.front() == '{') fail(line, "inline tables are not supported");
    std::string t = s.front() == '+' ? s.substr(1) : s;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v.num);
    if (ec != std::errc() || ptr != last) fail(line, "cannot parse value '" + s + "'");
    v.kind = RawValue::Kind::number;
    v.is_int = t.find_first_not_of("-0123456789") == std::string::npos;
    return v;
}

std::vector<std::string> split_array_elements(const std::string& body, int line) {
    std::vector<std::string> parts;
    std::string cur;
    bool in_string = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (in_string) {
            cur += c;
            if (c == '\\' && i + 1 < body.size()) {
                cur += body[++i];
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
            cur += c;
        } else if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    // A trailing comma leaves one empty tail element; drop it.
    if (!parts.empty() && trim(parts.back()).empty()) parts.pop_back();
    for (const auto& p : parts) {
        if (trim(p).empty()) fail(line, "empty array element");
    }
    return parts;
}

RawValue parse_value(const std::string& raw, int line) {
    std::string s = trim(raw);
    if (s.empty() || s.front() != '[') return parse_scalar(s, line);
    if (s.back() != ']') fail(line, "unterminated array");
    RawValue v;
    v.line = line;
    std::string body = s.substr(1, s.size() - 2);
    if (trim(body).empty()) {
        v.kind = RawValue::Kind::empty_array;
        return v;
    }
    bool saw_number = false;
    bool saw_string = false;
    for (const auto& part : split_array_elements(body, line)) {
        RawValue e = parse_scalar(part, line);
        if (e.kind == RawValue::Kind::number) {
            saw_number = true;
            v.nums.push_back(e.num);
        } else if (e.kind == RawValue::Kind::string) {
            saw_string = true;
            v.strs.push_back(e.str);
        } else {
            fail(line, "array elements must be numbers or strings");
        }
    }
    if (saw_number && saw_string) fail(line, "array elements must share one type");
    v.kind = saw_number ? RawValue::Kind::number_array : RawValue::Kind::string_array;
    return v;
}

std::string parse_key_path(const std::string& key, int line) {
    std::string path;
    std::string seg;
    std::istringstream in(key);
    while (std::getline(in, seg, '.')) {
        seg = trim(seg);
        if (!bare_key(seg)) fail(line, "invalid key '" + key + "'");
        if (!path.empty()) path += '.';
        path += seg;
    }
    if (path.empty() || key.back() == '.') fail(line, "invalid key '" + key + "'");
    return path;
}

Doc scan(const std::string& text) {
    Doc doc;
    std::istringstream in(text);
    std::string line;
    std::string prefix;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        int start_line = lineno;
        std::string s = trim(strip_comment(line, lineno));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.rfind("[[", 0) == 0) fail(lineno, "arrays of tables are not supported");
            if (s.back() != ']') fail(lineno, "malformed table header");
            std::string inner = trim(s.substr(1, s.size() - 2));
            prefix = parse_key_path(inner, lineno);
            auto [it, fresh] = doc.tables.insert({prefix, lineno});
            if (!fresh) {
                fail(lineno, "table '[" + prefix + "]' already defined at line " +
                                 std::to_string(it->second));
            }
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        std::string key = parse_key_path(trim(s.substr(0, eq)), lineno);
        std::string value = s.substr(eq + 1);
        // Arrays may continue over following lines until brackets close.
        while (bracket_depth(value) > 0 && std::getline(in, line)) {
            ++lineno;
            value += ' ';
            value += trim(strip_comment(line, lineno));
        }
        if (bracket_depth(value) > 0) fail(start_line, "unterminated array");
        std::string path = prefix.empty() ? key : prefix + '.' + key;
        RawValue v = parse_value(value, start_line);
        auto [it, fresh] = doc.items.insert({path, v});
        if (!fresh) {
            fail(start_line, "duplicate key '" + path + "' (first at line " +
                                 std::to_string(it->second.line) + ")");
        }
    }
    return doc;
}

// Typed, consumption-tracking view of the raw document. Getters record
// schema errors instead of throwing so one pass reports everything;
// finish() adds unknown keys and throws if anything went wrong.
class Reader {
  public:
    explicit Reader(Doc doc) : doc_(std::move(doc)) {}

    void error(const std::string& msg) { errors_.push_back(msg); }
    void error_at(int line, const std::string& msg) {
        errors_.push_back("line " + std::to_string(line) + ": " + msg);
    }

    const RawValue* find(const std::string& path) {
        auto it = doc_.items.find(path);
        if (it == doc_.items.end()) return nullptr;
        used_keys_.insert(path);
        return &it->second;
    }

    bool has_section(const std::string& prefix) const {
        if (doc_.tables.count(prefix) > 0) return true;
        std::string p = prefix + '.';
        auto item = doc_.items.lower_bound(p);
        if (item != doc_.items.end() && item->first.rfind(p, 0) == 0) return true;
        auto table = doc_.tables.lower_bound(p);
        return table != doc_.tables.end() && table->first.rfind(p, 0) == 0;
    }

    void use_table(const std::string& path) {
        if (doc_.tables.count(path) > 0) used_tables_.insert(path);
    }

    int line_of(const std::string& path) const {
        auto it = doc_.items.find(path);
        return it == doc_.items.end() ? 0 : it->second.line;
    }

    std::vector<std::string> children(const std::string& prefix) {
        std::set<std::string> out;
        std::string p = prefix + '.';
        auto collect = [&](const std::string& path) {
            if (path.rfind(p, 0) != 0) return;
            std::string rest = path.substr(p.size());
            out.insert(rest.substr(0, rest.find('.')));
        };
        for (const auto& [path, v] : doc_.items) collect(path);
        for (const auto& [path, line] : doc_.tables) collect(path);
        return {out.begin(), out.end()};
    }

    std::optional<std::string> opt_string(const std::string& path) {
        const RawValue* v = find(path);
        if (v == nullptr) return std::nullopt;
        if (v->kind != RawValue::Kind::string) {
            error_at(v->line, "key '" + path + "' must be a string");
            return std::nullopt;
        }
        return v->str;
    }

    std::string req_string(const std::string& path) {
        auto v = opt_string(path);
        if (!v && doc_.items.count(path) == 0) {
            error("missing required key '" + path + "'");
        }
        return v.value_or("");
    }

    std::optional<double> opt_number(const std::string& path) {
        const RawValue* v = find(path);
        if (v == nullptr) return std::nullopt;
        if (v->kind != RawValue::Kind::number) {
            error_at(v->line, "key '" + path + "' must be a number");
            return std::nullopt;
        }
        return v->num;
    }

    double req_number(const std::string& path) {
        auto v = opt_number(path);
        if (!v && doc_.items.count(path) == 0) {
            error("missing required key '" + path + "'");
        }
        return v.value_or(0.0);
    }

    std::optional<long long> opt_int(const std::string& path) {
        const RawValue* v = find(path);
        if (v == nullptr) return std::nullopt;
        if (v->kind != RawValue::Kind::number || !v->is_int) {
            error_at(v->line, "key '" + path + "' must be an integer");
            return std::nullopt;
        }
        return static_cast<long long>(v->num);
    }

    long long req_int(const std::string& path) {
        auto v = opt_int(path);
        if (!v && doc_.items.count(path) == 0) {
            error("missing required key '" + path + "'");
        }
        return v.value_or(0);
    }

    std::vector<std::string> req_string_array(const std::string& path) {
        const RawValue* v = find(path);
        if (v == nullptr) {
            error("missing required key '" + path + "'");
            return {};
        }
        if (v->kind == RawValue::Kind::empty_array) return {};
        if (v->kind != RawValue::Kind::string_array) {
            error_at(v->line, "key '" + path + "' must be an array of strings");
            return {};
        }
        return v->strs;
    }

    std::vector<double> req_number_array(const std::string& path) {
        const RawValue* v = find(path);
        if (v == nullptr) {
            error("missing required key '" + path + "'");
            return {};
        }
        if (v->kind == RawValue::Kind::empty_array) return {};
        if (v->kind != RawValue::Kind::number_array) {
            error_at(v->line, "key '" + path + "' must be an array of numbers");
            return {};
        }
        return v->nums;
    }

    void finish() {
        for (const auto& [path, v] : doc_.items) {
            if (used_keys_.count(path) == 0) {
                error_at(v.line, "unknown key '" + path + "'");
            }
        }
        for (const auto& [path, line] : doc_.tables) {
            if (used_tables_.count(path) == 0 && !table_implied(path)) {
                error_at(line, "unknown table '[" + path + "]'");
            }
        }
        if (errors_.empty()) return;
        std::string msg;
        for (std::size_t i = 0; i < errors_.size(); ++i) {
            if (i > 0) msg += '\n';
            msg += errors_[i];
        }
        throw config_error(msg);
    }

  private:
    // A header like [topology.link.d1.b1] marks its parents as present
    // without their own headers; only leaves need explicit consumption.
    bool table_implied(const std::string& path) const {
        std::string p = path + '.';
        for (const auto& t : used_tables_) {
            if (t.rfind(p, 0) == 0) return true;
        }
        for (const auto& k : used_keys_) {
            if (k.rfind(p, 0) == 0) return true;
        }
        return false;
    }

    Doc doc_;
    std::set<std::string> used_keys_;
    std::set<std::string> used_tables_;
    std::vector<std::string> errors_;
};

bool listed(const std::vector<std::string>& ids, const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

// Range checks stay quiet for absent keys: the missing-key error has
// already been recorded and the fallback value is meaningless.
void check_positive(Reader& r, const std::string& path, double v) {
    if (r.line_of(path) == 0) return;
    if (!(v > 0.0)) r.error_at(r.line_of(path), "key '" + path + "' must be positive");
}

void check_non_negative(Reader& r, const std::string& path, double v) {
    if (r.line_of(path) == 0) return;
    if (v < 0.0) r.error_at(r.line_of(path), "key '" + path + "' must be non-negative");
}

std::optional<RateLatency> read_rate_latency(Reader& r, const std::string& base) {
    double rate = r.req_number(base + ".rate");
    double latency = r.req_number(base + ".latency");
    check_positive(r, base + ".rate", rate);
    check_non_negative(r, base + ".latency", latency);
    if (rate > 0.0 && latency >= 0.0) return RateLatency(rate, latency);
    return std::nullopt;
}

void read_links(Reader& r, UbiITopology& t) {
    for (const auto& from : r.children("topology.link")) {
        for (const auto& to : r.children("topology.link." + from)) {
            std::string base = "topology.link." + from + "." + to;
            r.use_table(base);
            std::string kind = r.opt_string(base + ".kind").value_or("wired");
            if (kind == "wired") {
                if (auto svc = read_rate_latency(r, base)) {
                    t.links.insert({{from, to}, WiredLink{*svc}});
                }
                continue;
            }
            if (kind != "wireless") {
                r.error_at(r.line_of(base + ".kind"),
                           "key '" + base + ".kind' must be \"wired\" or \"wireless\"");
                continue;
            }
            double sps = r.req_number(base + ".symbols_per_slot");
            double slot = r.req_number(base + ".slot_duration");
            check_positive(r, base + ".symbols_per_slot", sps);
            check_positive(r, base + ".slot_duration", slot);
            std::string snr = r.req_string(base + ".snr");
            std::optional<SnrModel> model;
            if (snr == "constant") {
                double gamma = r.req_number(base + ".gamma");
                check_positive(r, base + ".gamma", gamma);
                if (gamma > 0.0) model = ConstantSnr{gamma};
            } else if (snr == "rayleigh") {
                double mean = r.req_number(base + ".mean");
                check_positive(r, base + ".mean", mean);
                if (mean > 0.0) model = RayleighSnr{mean};
            } else {
                r.error_at(r.line_of(base + ".snr"),
                           "key '" + base + ".snr' must be \"constant\" or \"rayleigh\"");
            }
            if (model && sps > 0.0 && slot > 0.0) {
                t.links.insert({{from, to}, WirelessLink{FadingChannel(sps, *model, slot)}});
            }
        }
    }
}

UbiITopology read_topology(Reader& r) {
    UbiITopology t;
    r.use_table("topology");
    t.devices = r.req_string_array("topology.devices");
    t.bss = r.req_string_array("topology.bss");
    t.clouds = r.req_string_array("topology.clouds");
    if (auto lvl = r.opt_int("topology.ubii_level")) t.ubii_level = static_cast<int>(*lvl);

    r.use_table("topology.assign");
    for (const auto& id : r.children("topology.assign")) {
        std::string path = "topology.assign." + id;
        std::string target = r.req_string(path);
        if (listed(t.devices, id)) {
            t.device_to_bs[id] = target;
        } else if (listed(t.bss, id)) {
            t.bs_to_cloud[id] = target;
        } else {
            r.error_at(r.line_of(path), "assignment for unknown node '" + id + "'");
        }
    }

    for (const auto& id : r.children("topology.compute")) {
        std::string base = "topology.compute." + id;
        r.use_table(base);
        if (auto svc = read_rate_latency(r, base)) t.compute.insert({id, *svc});
    }

    read_links(r, t);
    return t;
}

FlowEnvelope read_envelope(Reader& r, const std::string& base) {
    r.use_table(base);
    double rate = r.req_number(base + ".rate");
    double burst = r.req_number(base + ".burst");
    check_positive(r, base + ".rate", rate);
    check_non_negative(r, base + ".burst", burst);
    auto peak = r.opt_number(base + ".peak");
    auto max_packet = r.opt_number(base + ".max_packet");
    FlowEnvelope fallback = TokenBucket(1.0, 0.0);
    if (rate <= 0.0 || burst < 0.0) return fallback;
    if (!peak && !max_packet) return TokenBucket(rate, burst);
    if (!peak || !max_packet) {
        r.error("keys '" + base + ".peak' and '" + base +
                ".max_packet' must be given together");
        return fallback;
    }
    if (*peak < rate) {
        r.error_at(r.line_of(base + ".peak"),
                   "key '" + base + ".peak' must be at least the rate");
        return fallback;
    }
    if (*max_packet < 0.0 || *max_packet > burst) {
        r.error_at(r.line_of(base + ".max_packet"),
                   "key '" + base + ".max_packet' must lie in [0, burst]");
        return fallback;
    }
    return TSpec(*peak, *max_packet, rate, burst);
}

FlowSpec read_flow(Reader& r, AnalysisMode mode) {
    r.use_table("flow");
    FlowSpec f{.source_device = r.req_string("flow.source"),
               .uplink = read_envelope(r, "flow.uplink"),
               .downlink = read_envelope(r, "flow.downlink")};
    if (auto rounds = r.opt_int("flow.rounds")) {
        f.rounds = static_cast<int>(*rounds);
        if (f.rounds < 1) {
            r.error_at(r.line_of("flow.rounds"), "key 'flow.rounds' must be at least 1");
        }
    }
    if (auto eps = r.opt_number("flow.epsilon")) {
        f.epsilon = *eps;
        if (!(*eps > 0.0 && *eps < 1.0)) {
            r.error_at(r.line_of("flow.epsilon"),
                       "key 'flow.epsilon' must lie in (0, 1)");
        }
    }
    if (auto sigma = r.opt_number("flow.wireless_sigma")) {
        f.wireless_sigma = *sigma;
        check_non_negative(r, "flow.wireless_sigma", *sigma);
    }
    if (mode == AnalysisMode::hybrid && !f.epsilon) {
        r.error("hybrid mode requires key 'flow.epsilon'");
    }
    return f;
}

std::optional<SweepSpec> read_sweep(Reader& r) {
    if (!r.has_section("sweep")) return std::nullopt;
    r.use_table("sweep");
    SweepSpec s;
    s.param = r.req_string("sweep.param");
    s.values = r.req_number_array("sweep.values");
    if (s.values.empty() && r.line_of("sweep.values") != 0) {
        r.error("key 'sweep.values' must not be empty");
    }
    return s;
}

std::optional<SimSpec> read_sim(Reader& r) {
    if (!r.has_section("sim")) return std::nullopt;
    r.use_table("sim");
    SimSpec s{};
    s.slots = static_cast<int>(r.req_int("sim.slots"));
    if (s.slots < 1 && r.line_of("sim.slots") != 0) {
        r.error_at(r.line_of("sim.slots"), "key 'sim.slots' must be at least 1");
    }
    s.slot_duration = r.req_number("sim.slot_duration");
    check_positive(r, "sim.slot_duration", s.slot_duration);
    if (auto seed = r.opt_int("sim.seed")) {
        if (*seed < 0) {
            r.error_at(r.line_of("sim.seed"), "key 'sim.seed' must be non-negative");
        } else {
            s.seed = static_cast<std::uint64_t>(*seed);
        }
    }
    if (auto policy = r.opt_string("sim.policy")) {
        if (*policy == "greedy") {
            s.policy = SourcePolicy::greedy;
        } else if (*policy == "on_off") {
            s.policy = SourcePolicy::on_off;
        } else {
            r.error_at(r.line_of("sim.policy"),
                       "key 'sim.policy' must be \"greedy\" or \"on_off\"");
        }
    }
    return s;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    Reader r(scan(text));

    AnalysisMode mode = AnalysisMode::deterministic;
    std::string mode_str = r.req_string("mode");
    if (mode_str == "hybrid") {
        mode = AnalysisMode::hybrid;
    } else if (!mode_str.empty() && mode_str != "deterministic") {
        r.error_at(r.line_of("mode"), "key 'mode' must be \"deterministic\" or \"hybrid\"");
    }

    UbiITopology topology = read_topology(r);
    FlowSpec flow = read_flow(r, mode);
    std::optional<SweepSpec> sweep = read_sweep(r);
    std::optional<SimSpec> sim = read_sim(r);

    for (const auto& v : validate_topology(topology)) r.error("topology: " + v);
    if (!flow.source_device.empty() && !listed(topology.devices, flow.source_device)) {
        r.error_at(r.line_of("flow.source"),
                   "flow source '" + flow.source_device + "' is not a device");
    }
    r.finish();
    return ScenarioConfig{std::move(topology), std::move(flow), mode, std::move(sweep),
                          std::move(sim)};
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const config_error& e) {
        throw config_error("in " + path + ":\n" + e.what());
    }
}

}  // namespace ubinc
