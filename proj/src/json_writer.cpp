#include "mforge/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace mforge::jsonw {

std::string JsonWriter::format_double(double v) {
    if (!std::isfinite(v)) return v > 0 ? "\"inf\"" : (v < 0 ? "\"-inf\"" : "\"nan\"");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void JsonWriter::before_value() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!needs_comma_.empty()) {
        if (needs_comma_.back()) os_ << ",";
        needs_comma_.back() = true;
    }
}

JsonWriter& JsonWriter::begin_object() {
    before_value();
    os_ << "{";
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    needs_comma_.pop_back();
    os_ << "}";
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    before_value();
    os_ << "[";
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    needs_comma_.pop_back();
    os_ << "]";
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    if (needs_comma_.back()) os_ << ",";
    needs_comma_.back() = true;
    write_escaped(k);
    os_ << ":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    before_value();
    os_ << format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(long v) {
    before_value();
    os_ << v;
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    before_value();
    os_ << (v ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    before_value();
    write_escaped(v);
    return *this;
}

JsonWriter& JsonWriter::value(const mpz_class& v) {
    before_value();
    os_ << v.get_str();
    return *this;
}

JsonWriter& JsonWriter::value(const linalg::Vec& v) {
    begin_array();
    for (double c : v) value(c);
    return end_array();
}

JsonWriter& JsonWriter::value(const linalg::Mat& m) {
    begin_array();
    for (int i = 0; i < m.rows(); ++i) {
        begin_array();
        for (int j = 0; j < m.cols(); ++j) value(m(i, j));
        end_array();
    }
    return end_array();
}

void JsonWriter::finish() { os_ << "\n"; }

void JsonWriter::write_escaped(const std::string& s) {
    os_ << '"';
    for (char c : s) {
        switch (c) {
            case '"': os_ << "\\\""; break;
            case '\\': os_ << "\\\\"; break;
            case '\n': os_ << "\\n"; break;
            case '\t': os_ << "\\t"; break;
            case '\r': os_ << "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    os_ << buf;
                } else {
                    os_ << c;
                }
        }
    }
    os_ << '"';
}

}  // namespace mforge::jsonw
