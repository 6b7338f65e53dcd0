#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "qh/errors.hpp"
#include "qh/matrix.hpp"

namespace qh {

/// Closed catalog of scalar coefficient functions of time. Every form has an
/// analytic first derivative; the tan/sec forms declare their singular set.
class TimeFunction {
public:
    TimeFunction() : TimeFunction(constant(0.0)) {}

    static TimeFunction constant(cx value) {
        return TimeFunction(Node{Constant{value}});
    }
    static TimeFunction polynomial(std::vector<double> coeffs) {
        return TimeFunction(Node{Polynomial{std::move(coeffs)}});
    }
    static TimeFunction sinusoid(double amp, double freq, double phase = 0.0, double offset = 0.0) {
        return TimeFunction(Node{Sinusoid{amp, freq, phase, offset}});
    }
    static TimeFunction exponential(double amp, double rate) {
        return TimeFunction(Node{Exponential{amp, rate}});
    }
    static TimeFunction tan_scaled(double amp, double freq = 1.0) {
        return TimeFunction(Node{TanScaled{amp, freq}});
    }
    static TimeFunction sec_scaled(double amp, double freq = 1.0) {
        return TimeFunction(Node{SecScaled{amp, freq}});
    }
    static TimeFunction tanh_scaled(double amp, double freq = 1.0) {
        return TimeFunction(Node{TanhScaled{amp, freq}});
    }
    static TimeFunction sum(std::vector<TimeFunction> terms) {
        return TimeFunction(Node{Sum{std::move(terms)}});
    }
    static TimeFunction scaled(cx factor, TimeFunction inner) {
        return TimeFunction(Node{Scaled{factor, std::move(inner)}});
    }

    cx value(double t) const { return value_of(*node_, t); }
    cx derivative(double t) const { return derivative_of(*node_, t); }

    /// Distance from t to the nearest declared singularity (+inf if none).
    double singularity_distance(double t) const { return sing_dist(*node_, t); }

    TimeFunction conjugate() const { return TimeFunction(conj_of(*node_)); }
    TimeFunction negated() const { return scaled(cx{-1.0, 0.0}, *this); }

private:
    struct Constant { cx value; };
    struct Polynomial { std::vector<double> coeffs; };           // sum c_k t^k
    struct Sinusoid { double amp, freq, phase, offset; };        // amp*sin(freq t + phase) + offset
    struct Exponential { double amp, rate; };                    // amp*exp(rate t)
    struct TanScaled { double amp, freq; };                      // amp*tan(freq t)
    struct SecScaled { double amp, freq; };                      // amp*sec(freq t)
    struct TanhScaled { double amp, freq; };                     // amp*tanh(freq t)
    struct Sum { std::vector<TimeFunction> terms; };
    struct Scaled { cx factor; TimeFunction inner; };

    using Node = std::variant<Constant, Polynomial, Sinusoid, Exponential, TanScaled, SecScaled,
                              TanhScaled, Sum, Scaled>;

    explicit TimeFunction(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

    static cx value_of(const Node& n, double t) {
        return std::visit(
            [&](const auto& f) -> cx {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Constant>) {
                    return f.value;
                } else if constexpr (std::is_same_v<T, Polynomial>) {
                    double acc = 0.0;
                    for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = acc * t + *it;
                    return cx{acc, 0.0};
                } else if constexpr (std::is_same_v<T, Sinusoid>) {
                    return cx{f.amp * std::sin(f.freq * t + f.phase) + f.offset, 0.0};
                } else if constexpr (std::is_same_v<T, Exponential>) {
                    return cx{f.amp * std::exp(f.rate * t), 0.0};
                } else if constexpr (std::is_same_v<T, TanScaled>) {
                    return cx{f.amp * std::tan(f.freq * t), 0.0};
                } else if constexpr (std::is_same_v<T, SecScaled>) {
                    return cx{f.amp / std::cos(f.freq * t), 0.0};
                } else if constexpr (std::is_same_v<T, TanhScaled>) {
                    return cx{f.amp * std::tanh(f.freq * t), 0.0};
                } else if constexpr (std::is_same_v<T, Sum>) {
                    cx acc{0.0, 0.0};
                    for (const auto& term : f.terms) acc += term.value(t);
                    return acc;
                } else {
                    return f.factor * f.inner.value(t);
                }
            },
            n);
    }

    static cx derivative_of(const Node& n, double t) {
        return std::visit(
            [&](const auto& f) -> cx {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Constant>) {
                    return cx{0.0, 0.0};
                } else if constexpr (std::is_same_v<T, Polynomial>) {
                    double acc = 0.0;
                    for (size_t k = f.coeffs.size(); k-- > 1;)
                        acc = acc * t + static_cast<double>(k) * f.coeffs[k];
                    return cx{acc, 0.0};
                } else if constexpr (std::is_same_v<T, Sinusoid>) {
                    return cx{f.amp * f.freq * std::cos(f.freq * t + f.phase), 0.0};
                } else if constexpr (std::is_same_v<T, Exponential>) {
                    return cx{f.amp * f.rate * std::exp(f.rate * t), 0.0};
                } else if constexpr (std::is_same_v<T, TanScaled>) {
                    const double c = std::cos(f.freq * t);
                    return cx{f.amp * f.freq / (c * c), 0.0};
                } else if constexpr (std::is_same_v<T, SecScaled>) {
                    const double c = std::cos(f.freq * t);
                    return cx{f.amp * f.freq * std::sin(f.freq * t) / (c * c), 0.0};
                } else if constexpr (std::is_same_v<T, TanhScaled>) {
                    const double ch = std::cosh(f.freq * t);
                    return cx{f.amp * f.freq / (ch * ch), 0.0};
                } else if constexpr (std::is_same_v<T, Sum>) {
                    cx acc{0.0, 0.0};
                    for (const auto& term : f.terms) acc += term.derivative(t);
                    return acc;
                } else {
                    return f.factor * f.inner.derivative(t);
                }
            },
            n);
    }

    static double sing_dist(const Node& n, double t) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return std::visit(
            [&](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, TanScaled> || std::is_same_v<T, SecScaled>) {
                    // poles at freq*t = pi/2 + k*pi
                    const double pi = 3.14159265358979323846;
                    const double x = f.freq * t;
                    const double k = std::round((x - pi / 2.0) / pi);
                    const double pole = pi / 2.0 + k * pi;
                    return std::abs(x - pole) / std::abs(f.freq);
                } else if constexpr (std::is_same_v<T, Sum>) {
                    double d = inf;
                    for (const auto& term : f.terms) d = std::min(d, term.singularity_distance(t));
                    return d;
                } else if constexpr (std::is_same_v<T, Scaled>) {
                    return f.inner.singularity_distance(t);
                } else {
                    return inf;
                }
            },
            n);
    }

    static Node conj_of(const Node& n) {
        return std::visit(
            [&](const auto& f) -> Node {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Constant>) {
                    return Node{Constant{std::conj(f.value)}};
                } else if constexpr (std::is_same_v<T, Sum>) {
                    std::vector<TimeFunction> terms;
                    terms.reserve(f.terms.size());
                    for (const auto& term : f.terms) terms.push_back(term.conjugate());
                    return Node{Sum{std::move(terms)}};
                } else if constexpr (std::is_same_v<T, Scaled>) {
                    return Node{Scaled{std::conj(f.factor), f.inner.conjugate()}};
                } else {
                    return Node{f};  // real-valued leaf forms are self-conjugate
                }
            },
            n);
    }

    std::shared_ptr<const Node> node_;
};

} // namespace qh
