#ifndef MFORGE_JSON_WRITER_HPP
#define MFORGE_JSON_WRITER_HPP

// Minimal streaming JSON writer for CLI output: insertion-ordered keys and
// reals printed with 17 significant digits so doubles round-trip and output
// is byte-deterministic.

#include <gmpxx.h>

#include <ostream>
#include <string>
#include <vector>

#include "mforge/linalg.hpp"

namespace mforge::jsonw {

class JsonWriter {
public:
    explicit JsonWriter(std::ostream& os) : os_(os) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);

    JsonWriter& value(double v);
    JsonWriter& value(long v);
    JsonWriter& value(int v) { return value(static_cast<long>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const mpz_class& v);  // exact integer, raw digits
    JsonWriter& value(const linalg::Vec& v);
    JsonWriter& value(const linalg::Mat& m);  // array of row arrays

    // key/value in one go
    template <class T>
    JsonWriter& field(const std::string& k, const T& v) {
        key(k);
        return value(v);
    }

    void finish();  // newline

    static std::string format_double(double v);

private:
    std::ostream& os_;
    std::vector<bool> needs_comma_;
    bool pending_key_ = false;

    void before_value();
    void write_escaped(const std::string& s);
};

}  // namespace mforge::jsonw

#endif
