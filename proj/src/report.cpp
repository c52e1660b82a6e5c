#include "peakmdp/report.hpp"

#include "json.hpp"

#include <cstdio>

namespace peakmdp::report {

std::string format_real(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string scalar_text(const Scalar& s) {
    struct {
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_real(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    } visitor;
    return std::visit(visitor, s);
}

std::string scalar_json(const Scalar& s) {
    if (const auto* str = std::get_if<std::string>(&s)) return nlohmann::json(*str).dump();
    return scalar_text(s);
}

}  // namespace

Section& Section::add(std::string key, Scalar value) {
    fields_.push_back({std::move(key), {std::move(value)}, false});
    return *this;
}

Section& Section::add_list(std::string key, std::vector<Scalar> values) {
    fields_.push_back({std::move(key), std::move(values), true});
    return *this;
}

Section& Document::section() { return sections_.emplace_back(); }

void Document::set_body(std::string key, std::vector<std::string> lines) {
    body_key_ = std::move(key);
    body_ = std::move(lines);
}

std::string Document::to_text() const {
    std::string out;
    bool first = true;
    for (const auto& section : sections_) {
        if (!first) out += '\n';
        first = false;
        for (const auto& f : section.fields()) {
            out += f.key;
            for (const auto& v : f.values) {
                out += ' ';
                out += scalar_text(v);
            }
            out += '\n';
        }
    }
    if (!body_.empty()) {
        if (!first) out += '\n';
        for (const auto& line : body_) out += line + '\n';
    }
    return out;
}

std::string Document::to_json() const {
    // Built by hand so reals keep the 12-digit rendering.
    std::string out = "{\"sections\":[";
    for (std::size_t i = 0; i < sections_.size(); ++i) {
        if (i) out += ',';
        out += '{';
        const auto& fields = sections_[i].fields();
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (j) out += ',';
            out += nlohmann::json(fields[j].key).dump() + ':';
            if (fields[j].is_list) {
                out += '[';
                for (std::size_t k = 0; k < fields[j].values.size(); ++k) {
                    if (k) out += ',';
                    out += scalar_json(fields[j].values[k]);
                }
                out += ']';
            } else {
                out += scalar_json(fields[j].values.front());
            }
        }
        out += '}';
    }
    out += ']';
    if (!body_.empty()) out += ',' + nlohmann::json(body_key_).dump() + ':' + nlohmann::json(body_).dump();
    out += "}\n";
    return out;
}

}  // namespace peakmdp::report
