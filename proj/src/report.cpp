#include "qism/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "qism/errors.hpp"

namespace qism {

CheckResult make_check(std::string name, std::vector<Complex> values, double residual, double tolerance) {
    return {std::move(name), std::move(values), residual, tolerance, residual <= tolerance, {}};
}

CheckResult make_value(std::string name, std::vector<Complex> values) {
    return {std::move(name), std::move(values), 0.0, 0.0, true, {}};
}

CheckResult failed_check(std::string name, std::string note) {
    return {std::move(name), {}, std::nan(""), 0.0, false, std::move(note)};
}

bool RunReport::all_pass() const {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::string RunReport::to_json() const {
    nlohmann::ordered_json out;
    out["command"] = command;
    auto& p = out["params"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : params) p[key] = value;
    auto& list = out["results"] = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json entry;
        entry["check_name"] = r.name;
        auto& values = entry["values"] = nlohmann::ordered_json::array();
        for (const auto& v : r.values) values.push_back(format_complex(v));
        if (std::isfinite(r.residual))
            entry["residual"] = r.residual;
        else
            entry["residual"] = nullptr;
        entry["tolerance"] = r.tolerance;
        entry["pass"] = r.pass;
        if (!r.note.empty()) entry["note"] = r.note;
        list.push_back(std::move(entry));
    }
    out["seed"] = seed;
    out["elapsed_ms"] = elapsed_ms;
    return out.dump(2) + "\n";
}

namespace {

[[noreturn]] void bad_literal(std::string_view text) {
    throw InvalidArgument("malformed complex literal '" + std::string(text) + "'");
}

double parse_real(std::string_view part, std::string_view whole) {
    if (part.empty() || part.front() == '+') bad_literal(whole);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || end != part.data() + part.size() || !std::isfinite(value)) bad_literal(whole);
    return value;
}

// Coefficient of i: "", "+" and "-" stand for +-1.
double parse_imaginary(std::string_view part, std::string_view whole) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    if (part.front() == '+') part.remove_prefix(1);
    return parse_real(part, whole);
}

}  // namespace

Complex parse_complex(std::string_view text) {
    if (text.empty()) bad_literal(text);
    if (text.back() != 'i') return {parse_real(text, text), 0.0};
    const std::string_view body = text.substr(0, text.size() - 1);
    // The split is the last sign that is neither leading nor part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) return {0.0, parse_imaginary(body, text)};
    return {parse_real(body.substr(0, split), text), parse_imaginary(body.substr(split), text)};
}

std::vector<Complex> parse_complex_list(std::string_view text) {
    std::vector<Complex> out;
    if (text.empty()) return out;
    for (;;) {
        const auto comma = text.find(',');
        out.push_back(parse_complex(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_complex(Complex z) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g%+.17gi", z.real() == 0.0 ? 0.0 : z.real(),
                  z.imag() == 0.0 ? 0.0 : z.imag());
    return buffer;
}

std::string format_complex_list(const std::vector<Complex>& values) {
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) out += ',';
        out += format_complex(values[k]);
    }
    return out;
}

}  // namespace qism
