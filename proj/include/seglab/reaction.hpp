// Closed-form reaction terms f_i(s) with f_i(0) = 0.
#pragma once
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "seglab/errors.hpp"

namespace seglab {

struct ReactionTerm {
    enum class Kind { Zero, Cubic, Logistic, Linear };

    Kind kind = Kind::Zero;
    // Cubic: f(s) = omega*s^3 - lambda*s.
    double omega = 0.0;
    double lambda = 0.0;
    // Logistic: f(s) = a*s*(1 - s/cap).
    double a = 0.0;
    double cap = 1.0;
    // Linear: f(s) = c*s.
    double c = 0.0;

    static ReactionTerm zero() { return {}; }
    static ReactionTerm cubic(double omega_, double lambda_) {
        ReactionTerm t;
        t.kind = Kind::Cubic;
        t.omega = omega_;
        t.lambda = lambda_;
        return t;
    }
    static ReactionTerm logistic(double a_, double cap_) {
        if (!(cap_ > 0.0)) throw Error("logistic reaction needs positive capacity");
        ReactionTerm t;
        t.kind = Kind::Logistic;
        t.a = a_;
        t.cap = cap_;
        return t;
    }
    static ReactionTerm linear(double c_) {
        ReactionTerm t;
        t.kind = Kind::Linear;
        t.c = c_;
        return t;
    }

    double value(double s) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Cubic: return omega * s * s * s - lambda * s;
            case Kind::Logistic: return a * s * (1.0 - s / cap);
            case Kind::Linear: return c * s;
        }
        return 0.0;
    }

    double derivative(double s) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Cubic: return 3.0 * omega * s * s - lambda;
            case Kind::Logistic: return a * (1.0 - 2.0 * s / cap);
            case Kind::Linear: return c;
        }
        return 0.0;
    }

    /// Antiderivative F with F(0) = 0 (potential in the variational functional).
    double antiderivative(double s) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Cubic: return 0.25 * omega * s * s * s * s - 0.5 * lambda * s * s;
            case Kind::Logistic: return 0.5 * a * s * s - a * s * s * s / (3.0 * cap);
            case Kind::Linear: return 0.5 * c * s * s;
        }
        return 0.0;
    }

    /// sup over (0, smax] of |f(s)/s|.
    double slope_bound(double smax) const {
        smax = std::max(smax, 0.0);
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Cubic:
                return std::max(std::abs(lambda), std::abs(omega * smax * smax - lambda));
            case Kind::Logistic:
                return std::max(std::abs(a), std::abs(a * (1.0 - smax / cap)));
            case Kind::Linear: return std::abs(c);
        }
        return 0.0;
    }

    /// Reaction of the rescaled configuration V(x) = U(x0 + t x)/rho:
    /// g(s) = (t^2/rho) f(rho s). Closed under every kind above.
    ReactionTerm rescaled(double t, double rho) const {
        const double t2 = t * t;
        switch (kind) {
            case Kind::Zero: return zero();
            case Kind::Cubic: return cubic(omega * rho * rho * t2, lambda * t2);
            case Kind::Logistic: return logistic(a * t2, cap / rho);
            case Kind::Linear: return linear(c * t2);
        }
        return zero();
    }

    std::string kind_name() const {
        switch (kind) {
            case Kind::Zero: return "zero";
            case Kind::Cubic: return "cubic";
            case Kind::Logistic: return "logistic";
            case Kind::Linear: return "linear";
        }
        return "zero";
    }
};

/// Per-component reaction, plus the slope constant d used by the frequency
/// machinery: d = max_i sup |f_i(s)/s| over the configuration's value range.
struct ReactionSpec {
    std::vector<ReactionTerm> terms;

    ReactionSpec() = default;
    explicit ReactionSpec(std::size_t h) : terms(h) {}
    static ReactionSpec zero(std::size_t h) { return ReactionSpec(h); }

    std::size_t size() const { return terms.size(); }
    const ReactionTerm& operator[](std::size_t i) const { return terms[i]; }
    ReactionTerm& operator[](std::size_t i) { return terms[i]; }

    bool is_zero() const {
        for (const auto& t : terms)
            if (t.kind != ReactionTerm::Kind::Zero) return false;
        return true;
    }

    double d_bound(double smax) const {
        double d = 0.0;
        for (const auto& t : terms) d = std::max(d, t.slope_bound(smax));
        return d;
    }

    ReactionSpec rescaled(double t, double rho) const {
        ReactionSpec out(terms.size());
        for (std::size_t i = 0; i < terms.size(); ++i) out.terms[i] = terms[i].rescaled(t, rho);
        return out;
    }
};

} // namespace seglab
