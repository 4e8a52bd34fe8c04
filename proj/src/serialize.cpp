// Copyright 2026 nicd Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nicd/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nicd {

namespace {

const char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

int digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    if (c >= 'A' && c <= 'Z') return c - 'A' + 36;
    return -1;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    // Shortest representation that round-trips exactly.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

void write_explicit_set(std::ostream& out, const ExplicitSet& set) {
    if (set.s > 62)
        throw std::invalid_argument("write_explicit_set: text format limited to s <= 62");
    validate_spec(SetSpec{set});
    out << set.s << ' ' << set.n << '\n';
    for (std::uint64_t p : set.points) {
        const SymbolString x = string_at(p, set.s, set.n);
        std::string line(static_cast<std::size_t>(set.n), '0');
        for (int i = 0; i < set.n; ++i)
            line[static_cast<std::size_t>(i)] = kDigits[x[static_cast<std::size_t>(i)]];
        out << line << '\n';
    }
}

ExplicitSet read_explicit_set(std::istream& in) {
    ExplicitSet set;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("read_explicit_set: missing header line");
    {
        std::istringstream header(line);
        if (!(header >> set.s >> set.n))
            throw std::invalid_argument("read_explicit_set: header must be \"s n\"");
    }
    if (set.s < 2 || set.s > 62 || set.n < 1)
        throw std::invalid_argument("read_explicit_set: bad header values");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (static_cast<int>(line.size()) != set.n)
            throw std::invalid_argument("read_explicit_set: line " + std::to_string(lineno) +
                                        " has wrong length");
        SymbolString x(static_cast<std::size_t>(set.n));
        for (int i = 0; i < set.n; ++i) {
            const int v = digit_value(line[static_cast<std::size_t>(i)]);
            if (v < 0 || v >= set.s)
                throw std::invalid_argument("read_explicit_set: line " + std::to_string(lineno) +
                                            " position " + std::to_string(i + 1) +
                                            ": symbol out of range");
            x[static_cast<std::size_t>(i)] = v;
        }
        set.points.push_back(index_of(x, set.s));
    }
    std::sort(set.points.begin(), set.points.end());
    const auto dup = std::adjacent_find(set.points.begin(), set.points.end());
    if (dup != set.points.end())
        throw std::invalid_argument("read_explicit_set: duplicate point");
    validate_spec(SetSpec{set});
    return set;
}

void save_explicit_set(const std::string& path, const ExplicitSet& set) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_explicit_set: cannot open " + path);
    write_explicit_set(out, set);
}

ExplicitSet load_explicit_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_explicit_set: cannot open " + path);
    return read_explicit_set(in);
}

namespace {

// Parses "key=value" fields of a structured descriptor.
std::map<std::string, std::string> parse_fields(const std::string& body) {
    std::map<std::string, std::string> fields;
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t comma = body.find(',', pos);
        const std::string item =
            body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("set descriptor: expected key=value near \"" + item +
                                        "\"");
        fields[item.substr(0, eq)] = item.substr(eq + 1);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return fields;
}

int field_int(const std::map<std::string, std::string>& fields, const std::string& key) {
    const auto it = fields.find(key);
    if (it == fields.end())
        throw std::invalid_argument("set descriptor: missing field \"" + key + "\"");
    try {
        return std::stoi(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument("set descriptor: field \"" + key + "\" is not an integer");
    }
}

double field_double(const std::map<std::string, std::string>& fields, const std::string& key) {
    const auto it = fields.find(key);
    if (it == fields.end())
        throw std::invalid_argument("set descriptor: missing field \"" + key + "\"");
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument("set descriptor: field \"" + key + "\" is not a number");
    }
}

}  // namespace

SetSpec parse_set_descriptor(const std::string& descriptor) {
    if (descriptor.rfind("cylinder:", 0) == 0) {
        const auto fields = parse_fields(descriptor.substr(9));
        CylinderSet c{field_int(fields, "s"), field_int(fields, "n"), field_int(fields, "k")};
        SetSpec spec{c};
        validate_spec(spec);
        return spec;
    }
    if (descriptor.rfind("ball:", 0) == 0) {
        const auto fields = parse_fields(descriptor.substr(5));
        HammingBallSet b;
        b.s = field_int(fields, "s");
        b.n = field_int(fields, "n");
        b.alpha = field_double(fields, "alpha");
        if (fields.count("zeros")) b.count_zeros = field_int(fields, "zeros") != 0;
        SetSpec spec{b};
        validate_spec(spec);
        return spec;
    }
    if (descriptor.rfind("explicit:", 0) == 0)
        throw std::invalid_argument(
            "set descriptor: explicit sets are read from files; pass a path instead");
    // Anything else is treated as a path to an explicit-set file.
    return SetSpec{load_explicit_set(descriptor)};
}

nlohmann::json report_to_json(const SetSpec& spec, const NoiseModel& model,
                              const AgreementReport& report) {
    nlohmann::json j;
    j["set"] = spec_descriptor(spec);
    j["epsilon"] = model.epsilon;
    j["method"] = method_name(report.method);
    j["set_probability"] = report.set_probability;
    j["joint"] = report.joint;
    j["conditional"] = report.conditional;
    if (report.m_value) j["m_value"] = *report.m_value;
    else j["m_value"] = nullptr;
    j["log_set_probability"] = report.log_set_probability;
    j["log_joint"] = report.log_joint;
    return j;
}

nlohmann::json protocol_to_json(const TranslationProtocol& tp, bool include_decoder) {
    nlohmann::json j;
    j["format"] = "nicd-protocol";
    j["version"] = 1;
    j["s"] = tp.centers.s;
    j["n"] = tp.centers.n;
    j["k"] = tp.centers.k;
    j["seed"] = tp.centers.seed;
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : factorize(static_cast<std::uint64_t>(tp.centers.s)))
        factors.push_back({{"p", f.prime}, {"exponent", f.exponent}});
    j["factors"] = factors;
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : tp.centers.layers)
        layers.push_back({{"p", layer.p}, {"basis", layer.basis}, {"offset", layer.offset}});
    j["layers"] = layers;
    j["centers"] = tp.centers.centers;
    j["set"] = {{"s", tp.set.s}, {"n", tp.set.n}, {"points", tp.set.points}};
    if (include_decoder) j["decoder"] = tp.decoder;
    return j;
}

TranslationProtocol protocol_from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j["format"] != "nicd-protocol")
        throw std::invalid_argument("protocol_from_json: not a protocol file");
    TranslationProtocol tp;
    tp.centers.s = j.at("s").get<int>();
    tp.centers.n = j.at("n").get<int>();
    tp.centers.k = j.at("k").get<int>();
    tp.centers.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& layer : j.at("layers")) {
        SubspaceLayer sl;
        sl.p = layer.at("p").get<int>();
        sl.basis = layer.at("basis").get<std::vector<std::vector<int>>>();
        sl.offset = layer.at("offset").get<std::vector<int>>();
        tp.centers.layers.push_back(std::move(sl));
    }
    tp.centers.centers = j.at("centers").get<std::vector<std::uint64_t>>();
    tp.set.s = j.at("set").at("s").get<int>();
    tp.set.n = j.at("set").at("n").get<int>();
    tp.set.points = j.at("set").at("points").get<std::vector<std::uint64_t>>();
    if (j.contains("decoder") && !j["decoder"].is_null()) {
        tp.decoder = j["decoder"].get<std::vector<std::uint32_t>>();
    } else {
        tp = build_protocol(tp.set, tp.centers);  // reconstruct from the parts
    }
    return tp;
}

}  // namespace nicd
