#include "qtt_cli/function_spec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qtt/badic.hpp"
#include "qtt/errors.hpp"

namespace qtt::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_plain(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw DomainError("not a number: '" + s + "'");
    return v;
}

}  // namespace

double parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw DomainError("empty number");
    const auto slash = s.find('/');
    if (slash == std::string::npos) return parse_plain(s);
    const double num = parse_plain(trim(s.substr(0, slash)));
    const double den = parse_plain(trim(s.substr(slash + 1)));
    if (den == 0.0) throw DomainError("zero denominator in '" + s + "'");
    return num / den;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) out.push_back(parse_number(tok));
    if (out.empty()) throw DomainError("empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_list(s)) {
        if (v != std::floor(v)) throw DomainError("expected integers in '" + s + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

FunctionSpec parse_function(const std::string& text) {
    FunctionSpec spec;
    spec.text = text;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);

    if (kind == "poly") {
        spec.kind = FunctionKind::Poly;
        const std::vector<double> c = parse_list(args);
        spec.f = [c](double x) {
            double v = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
            return v;
        };
    } else if (kind == "sin") {
        spec.kind = FunctionKind::Sin;
        const double k = args.empty() ? 1.0 : parse_number(args);
        spec.f = [k](double x) { return std::sin(2.0 * std::numbers::pi * k * x); };
    } else if (kind == "abs_power") {
        spec.kind = FunctionKind::AbsPower;
        const std::vector<double> a = parse_list(args);
        if (a.size() != 2) throw DomainError("abs_power needs center,exponent");
        if (!(a[1] > 0.0)) throw DomainError("abs_power exponent must be > 0");
        const double c = a[0], g = a[1];
        spec.f = [c, g](double x) { return std::pow(std::abs(x - c), g); };
        spec.singular_points = {c};
    } else if (kind == "sqrt") {
        spec.kind = FunctionKind::Sqrt;
        spec.f = [](double x) { return std::sqrt(x); };
        spec.singular_points = {0.0};
    } else if (kind == "indicator") {
        spec.kind = FunctionKind::Indicator;
        const auto at = args.find('@');
        SimpleFunction sf;
        sf.breakpoints = parse_list(args.substr(0, at));
        if (at != std::string::npos) {
            sf.values = parse_list(args.substr(at + 1));
        } else {
            for (std::size_t i = 0; i <= sf.breakpoints.size(); ++i) sf.values.push_back(i % 2 == 0 ? 1.0 : 0.0);
        }
        validate(sf);
        spec.singular_points = sf.breakpoints;
        spec.f = sf;
        spec.simple = std::move(sf);
    } else if (kind == "samples") {
        spec.kind = FunctionKind::Samples;
        if (args.empty()) throw DomainError("samples needs a file path");
        std::ifstream is(args);
        if (!is) throw IoError("cannot open samples file: " + args);
        std::vector<double> xs, ys;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            const auto parts = split(line, ',');
            if (parts.size() != 2) throw IoError(args + ":" + std::to_string(lineno) + ": expected x,f(x)");
            double x = 0.0, y = 0.0;
            try {
                x = parse_number(parts[0]);
                y = parse_number(parts[1]);
            } catch (const DomainError&) {
                if (xs.empty() && lineno == 1) continue;  // header
                throw IoError(args + ":" + std::to_string(lineno) + ": not numeric");
            }
            if (!xs.empty() && !(x > xs.back())) {
                throw IoError(args + ":" + std::to_string(lineno) + ": x must be strictly increasing");
            }
            xs.push_back(x);
            ys.push_back(y);
        }
        if (xs.size() < 2) throw IoError("samples file needs at least two points: " + args);
        spec.sample_x = xs;
        spec.f = [xs, ys](double x) {
            if (x <= xs.front()) return ys.front();
            if (x >= xs.back()) return ys.back();
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t k = static_cast<std::size_t>(it - xs.begin());
            const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
            return (1.0 - t) * ys[k - 1] + t * ys[k];
        };
    } else {
        throw DomainError("unknown function kind '" + kind +
                          "' (poly, sin, abs_power, sqrt, indicator, samples)");
    }
    return spec;
}

void check_sample_density(const FunctionSpec& spec, int base, int level, int degree) {
    if (spec.kind != FunctionKind::Samples) return;
    const auto& xs = spec.sample_x;
    if (xs.front() > 0.0) throw DomainError("samples must start at x = 0");
    const auto cells = checked_pow(base, level);
    if (!cells || *cells > xs.size()) {
        throw DomainError("samples too sparse for level " + std::to_string(level));
    }
    std::vector<std::size_t> count(*cells, 0);
    for (double x : xs) {
        if (x < 0.0 || x >= 1.0) continue;
        ++count[std::min(*cells - 1, static_cast<std::size_t>(x * static_cast<double>(*cells)))];
    }
    const auto need = static_cast<std::size_t>(2 * (degree + 1));
    for (std::size_t j = 0; j < count.size(); ++j) {
        if (count[j] < need) {
            throw DomainError("samples: cell " + std::to_string(j) + " at level " + std::to_string(level) +
                              " has " + std::to_string(count[j]) + " points, needs " + std::to_string(need));
        }
    }
}

}  // namespace qtt::cli
