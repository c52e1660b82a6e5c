#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace peakmdp::report {

/// Scalar report value. Reals are always printed with 12 significant digits.
using Scalar = std::variant<std::string, std::int64_t, double, bool>;

struct Field {
    std::string key;
    std::vector<Scalar> values;
    bool is_list = false;
};

/// Group of key/value records; rendered as a block of `key value` lines.
class Section {
public:
    Section& add(std::string key, Scalar value);
    Section& add(std::string key, const char* value) { return add(std::move(key), Scalar{std::string(value)}); }
    Section& add(std::string key, std::size_t value) { return add(std::move(key), Scalar{static_cast<std::int64_t>(value)}); }
    Section& add(std::string key, int value) { return add(std::move(key), Scalar{static_cast<std::int64_t>(value)}); }
    Section& add(std::string key, std::int64_t value) { return add(std::move(key), Scalar{value}); }
    Section& add(std::string key, double value) { return add(std::move(key), Scalar{value}); }
    Section& add(std::string key, bool value) { return add(std::move(key), Scalar{value}); }
    Section& add(std::string key, std::string value) { return add(std::move(key), Scalar{std::move(value)}); }
    Section& add_list(std::string key, std::vector<Scalar> values);

    const std::vector<Field>& fields() const { return fields_; }

private:
    std::vector<Field> fields_;
};

class Document {
public:
    Section& section();
    /// Appended verbatim after the sections in text mode; an array of lines in JSON.
    void set_body(std::string key, std::vector<std::string> lines);

    std::string to_text() const;
    std::string to_json() const;

private:
    std::vector<Section> sections_;
    std::string body_key_;
    std::vector<std::string> body_;
};

std::string format_real(double v);

}  // namespace peakmdp::report
