#pragma once

// Tower numbers: value = exp(exp(...exp(mantissa))) with `level` exponentials.
// Used for thresholds such as Q >= exp(q^8) and log T ~ Q^{3/2}.

#include <cmath>
#include <compare>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace euni {

class Magnitude {
public:
    /// Anything at level 0 is a plain double below this; higher levels keep
    /// the mantissa in [log(kCut), kCut).
    static constexpr double kCut = 700.0;

    Magnitude() = default;

    static Magnitude from_double(double v) { Magnitude m; m.mantissa_ = v; m.normalize(); return m; }

    /// e^x for a real exponent x.
    static Magnitude from_log(double x) { return exp(from_double(x)); }

    /// Raw constructor, normalized.
    static Magnitude tower(int level, double mantissa)
    {
        if (level < 0) throw std::invalid_argument("Magnitude: negative level");
        Magnitude m; m.level_ = level; m.mantissa_ = mantissa; m.normalize(); return m;
    }

    int level() const { return level_; }
    double mantissa() const { return mantissa_; }

    /// Plain double value; +inf when the value is beyond double range.
    double to_double() const
    {
        if (level_ == 0) return mantissa_;
        if (level_ == 1) return std::exp(mantissa_);
        if (level_ == 2 && mantissa_ <= std::log(std::log(std::numeric_limits<double>::max()))) return std::exp(std::exp(mantissa_));
        return std::numeric_limits<double>::infinity();
    }

    bool fits_double() const { return level_ <= 1; }

    /// Natural log as a Magnitude. Requires a positive value.
    Magnitude log() const
    {
        if (level_ == 0) {
            if (!(mantissa_ > 0)) throw std::domain_error("Magnitude::log of non-positive value");
            return from_double(std::log(mantissa_));
        }
        Magnitude m; m.level_ = level_ - 1; m.mantissa_ = mantissa_; m.normalize(); return m;
    }

    /// log as a double when representable (value below exp(e^700)).
    double log_double() const { return log().to_double(); }

    static Magnitude exp(const Magnitude& a)
    {
        if (a.level_ == 0) {
            if (a.mantissa_ < std::log(kCut)) return from_double(std::exp(a.mantissa_));
            return tower(1, a.mantissa_);
        }
        return tower(a.level_ + 1, a.mantissa_);
    }

    bool is_positive() const { return level_ > 0 || mantissa_ > 0; }

    friend Magnitude operator+(const Magnitude& a, const Magnitude& b)
    {
        if (a.fits_double() && b.fits_double()) return from_double(a.to_double() + b.to_double());
        const Magnitude& hi = (a >= b) ? a : b;
        const Magnitude& lo = (a >= b) ? b : a;
        if (lo.fits_double()) return hi;  // relative change below double resolution
        Magnitude lh = hi.log(), ll = lo.log();
        if (lh.fits_double() && ll.fits_double()) {
            double x = lh.to_double(), y = ll.to_double();
            return from_log(x + std::log1p(std::exp(y - x)));
        }
        return hi;
    }

    friend Magnitude operator-(const Magnitude& a, const Magnitude& b)
    {
        if (a.fits_double() && b.fits_double()) return from_double(a.to_double() - b.to_double());
        if (b.fits_double()) return a;
        if (a < b) throw std::domain_error("Magnitude: negative result beyond double range");
        Magnitude la = a.log(), lb = b.log();
        if (la.fits_double() && lb.fits_double()) {
            double x = la.to_double(), y = lb.to_double();
            if (x == y) return from_double(0.0);
            return from_log(x + std::log1p(-std::exp(y - x)));
        }
        if (la == lb) return from_double(0.0);
        return a;
    }

    friend Magnitude operator*(const Magnitude& a, const Magnitude& b)
    {
        if (a.fits_double() && b.fits_double()) {
            double p = a.to_double() * b.to_double();
            if (std::isfinite(p) && std::fabs(p) < 1e300) return from_double(p);
        }
        double sa = a.sign(), sb = b.sign();
        if (sa == 0 || sb == 0) return from_double(0.0);
        if (sa * sb < 0) throw std::domain_error("Magnitude: negative product beyond double range");
        Magnitude la = a.abs().log(), lb = b.abs().log();
        return exp(la + lb);
    }

    friend Magnitude operator/(const Magnitude& a, const Magnitude& b)
    {
        if (a.fits_double() && b.fits_double()) {
            double p = a.to_double() / b.to_double();
            if (std::isfinite(p) && std::fabs(p) < 1e300) return from_double(p);
        }
        double sa = a.sign(), sb = b.sign();
        if (sb == 0) throw std::domain_error("Magnitude: division by zero");
        if (sa == 0) return from_double(0.0);
        Magnitude la = a.abs().log(), lb = b.abs().log();
        Magnitude d = la - lb;
        if (sa * sb < 0) {
            if (!d.fits_double() || d.to_double() > std::log(1e300))
                throw std::domain_error("Magnitude: negative quotient beyond double range");
            return from_double(-std::exp(d.to_double()));
        }
        if (d.fits_double()) return from_log(d.to_double());
        return exp(d);
    }

    /// a^p for positive a and real p.
    static Magnitude pow(const Magnitude& a, double p)
    {
        if (p == 0) return from_double(1.0);
        Magnitude l = a.log();
        if (p > 0) return exp(l * from_double(p));
        // negative power: representable only while the log fits a double
        if (!l.fits_double()) return from_double(0.0);
        return from_log(l.to_double() * p);
    }

    friend bool operator==(const Magnitude& a, const Magnitude& b)
    {
        return a.level_ == b.level_ && a.mantissa_ == b.mantissa_;
    }

    friend std::partial_ordering operator<=>(const Magnitude& a, const Magnitude& b)
    {
        if (a.level_ != b.level_) return a.level_ <=> b.level_;
        return a.mantissa_ <=> b.mantissa_;
    }

    std::string str() const
    {
        std::ostringstream os;
        os.precision(17);
        if (level_ == 0) os << mantissa_;
        else os << "exp^" << level_ << "(" << mantissa_ << ")";
        return os.str();
    }

private:
    double sign() const { return level_ > 0 ? 1.0 : (mantissa_ > 0 ? 1.0 : (mantissa_ < 0 ? -1.0 : 0.0)); }
    Magnitude abs() const { Magnitude m = *this; if (level_ == 0) m.mantissa_ = std::fabs(mantissa_); return m; }

    void normalize()
    {
        if (std::isnan(mantissa_)) throw std::domain_error("Magnitude: NaN");
        if (std::isinf(mantissa_)) {
            if (mantissa_ < 0) throw std::domain_error("Magnitude: -inf");
            throw std::overflow_error("Magnitude: infinite mantissa");
        }
        const double lcut = std::log(kCut);
        for (;;) {
            if (level_ == 0) {
                if (mantissa_ >= kCut) { mantissa_ = std::log(mantissa_); level_ = 1; continue; }
                return;
            }
            if (mantissa_ >= kCut) { mantissa_ = std::log(mantissa_); ++level_; continue; }
            if (mantissa_ < lcut) { mantissa_ = std::exp(mantissa_); --level_; continue; }
            return;
        }
    }

    int level_ = 0;
    double mantissa_ = 0.0;
};

}  // namespace euni
