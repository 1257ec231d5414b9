#include "lightplan/emit.hpp"

#include <cstdio>

namespace lightplan {

std::string fmt_g9(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void JsonWriter::prefix() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_in_scope_.empty()) {
        if (!first_in_scope_.back()) out_ += ",";
        first_in_scope_.back() = false;
    }
}

JsonWriter& JsonWriter::begin_object() {
    prefix();
    out_ += "{";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += "}";
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    prefix();
    out_ += "[";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += "]";
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
    if (!first_in_scope_.empty()) {
        if (!first_in_scope_.back()) out_ += ",";
        first_in_scope_.back() = false;
    }
    out_ += "\"" + json_escape(name) + "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    prefix();
    out_ += fmt_g9(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    prefix();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    prefix();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    prefix();
    out_ += "\"" + json_escape(v) + "\"";
    return *this;
}

JsonWriter& JsonWriter::null_value() {
    prefix();
    out_ += "null";
    return *this;
}

}  // namespace lightplan
