// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/canonical_json.hpp"

#include "dyngeo/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dyngeo {

std::string format_real(double value) {
    if (!std::isfinite(value)) throw SchemaError("non-finite real cannot be serialized");
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.9f", value);
    std::string s = buf;
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        auto last = s.find_last_not_of('0');
        s.erase(last == dot ? dot : last + 1);
    }
    if (s == "-0") s = "0";
    return s;
}

namespace {

void dump_into(const Json& v, std::string& out) {
    switch (v.type()) {
    case Json::value_t::object: {
        out += '{';
        bool first = true;
        for (const auto& [key, item] : v.items()) {  // object_t is an ordered std::map
            if (!first) out += ',';
            first = false;
            out += Json(key).dump();
            out += ':';
            dump_into(item, out);
        }
        out += '}';
        break;
    }
    case Json::value_t::array: {
        out += '[';
        bool first = true;
        for (const auto& item : v) {
            if (!first) out += ',';
            first = false;
            dump_into(item, out);
        }
        out += ']';
        break;
    }
    case Json::value_t::number_float:
        out += format_real(v.get<double>());
        break;
    default:
        out += v.dump();
        break;
    }
}

}  // namespace

std::string canonical_dump(const Json& value) {
    std::string out;
    dump_into(value, out);
    return out;
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
}

}  // namespace dyngeo
