#pragma once

/**
 * @file coeff.hpp
 * @brief Coefficient domains Q, F_p and Z with exact scalar arithmetic.
 *
 * Every scalar in the library is a boost::multiprecision rational. The
 * domain decides how a rational is normalized: F_p reduces it to a
 * representative in [0, p), Z rejects non-integral values, Q keeps it.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mcat {

using Integer = boost::multiprecision::cpp_int;
using Scalar = boost::multiprecision::cpp_rational;

enum class ErrorCode {
    UnitViolation,
    CommutativityViolation,
    AssociativityViolation,
    NonPrimeModulus,
    AlgebraMismatch,
    CoefficientMismatch,
    UnsupportedCoefficients,
    MorphismMismatch,
    MultiplicativityViolation,
    SubspaceMismatch,
    SizeGuardExceeded,
    InvalidSpec,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnitViolation: return "UnitViolation";
    case ErrorCode::CommutativityViolation: return "CommutativityViolation";
    case ErrorCode::AssociativityViolation: return "AssociativityViolation";
    case ErrorCode::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::CoefficientMismatch: return "CoefficientMismatch";
    case ErrorCode::UnsupportedCoefficients: return "UnsupportedCoefficients";
    case ErrorCode::MorphismMismatch: return "MorphismMismatch";
    case ErrorCode::MultiplicativityViolation: return "MultiplicativityViolation";
    case ErrorCode::SubspaceMismatch: return "SubspaceMismatch";
    case ErrorCode::SizeGuardExceeded: return "SizeGuardExceeded";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    }
    return "Unknown";
}

/// Error raised by algebra construction and algebra operations.
class AlgebraError : public std::runtime_error {
public:
    AlgebraError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Floor-style modulus for arbitrary-precision integers: result in [0, m).
inline Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

class CoefficientDomain {
public:
    enum class Kind { Rationals, PrimeField, Integers };

    CoefficientDomain() = default;

    static CoefficientDomain rationals() { return CoefficientDomain(Kind::Rationals, 0); }
    static CoefficientDomain integers() { return CoefficientDomain(Kind::Integers, 0); }
    static CoefficientDomain prime_field(std::int64_t p) {
        if (!is_prime(p))
            throw AlgebraError(ErrorCode::NonPrimeModulus,
                               "modulus " + std::to_string(p) + " is not prime");
        return CoefficientDomain(Kind::PrimeField, p);
    }

    /// Accepts "Q", "Z", "F<p>" (e.g. "F2") and "F_<p>".
    static CoefficientDomain parse(std::string_view text) {
        if (text == "Q") return rationals();
        if (text == "Z") return integers();
        if (!text.empty() && text.front() == 'F') {
            auto digits = text.substr(1);
            if (!digits.empty() && digits.front() == '_') digits.remove_prefix(1);
            std::int64_t p = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
            if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty())
                return prime_field(p);
        }
        throw AlgebraError(ErrorCode::InvalidSpec,
                           "unknown coefficient domain '" + std::string(text) +
                               "' (expected Q, Z or F<p>)");
    }

    Kind kind() const noexcept { return kind_; }
    std::int64_t characteristic() const noexcept { return p_; }
    bool is_field() const noexcept { return kind_ != Kind::Integers; }

    std::string name() const {
        switch (kind_) {
        case Kind::Rationals: return "Q";
        case Kind::Integers: return "Z";
        case Kind::PrimeField: return "F" + std::to_string(p_);
        }
        return "?";
    }

    Scalar normalize(const Scalar& x) const {
        switch (kind_) {
        case Kind::Rationals:
            return x;
        case Kind::Integers:
            if (denominator(x) != 1)
                throw AlgebraError(ErrorCode::InvalidSpec,
                                   "non-integral coefficient " + x.str() + " over Z");
            return x;
        case Kind::PrimeField: {
            const Integer p = p_;
            const Integer den = mod_floor(denominator(x), p);
            if (den == 0)
                throw AlgebraError(ErrorCode::InvalidSpec,
                                   "coefficient " + x.str() + " has denominator divisible by " +
                                       std::to_string(p_));
            const Integer num = mod_floor(numerator(x), p);
            return Scalar(mod_floor(num * inverse_mod(den, p), p));
        }
        }
        return x;
    }

    Scalar add(const Scalar& a, const Scalar& b) const { return normalize(a + b); }
    Scalar sub(const Scalar& a, const Scalar& b) const { return normalize(a - b); }
    Scalar mul(const Scalar& a, const Scalar& b) const { return normalize(a * b); }
    Scalar neg(const Scalar& a) const { return normalize(-a); }

    /// Multiplicative inverse; defined over fields only.
    Scalar inverse(const Scalar& a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        if (kind_ == Kind::Integers) {
            if (a == 1 || a == -1) return a;
            throw AlgebraError(ErrorCode::UnsupportedCoefficients,
                               "no inverse of " + a.str() + " over Z");
        }
        if (kind_ == Kind::Rationals) return Scalar(1) / a;
        return normalize(Scalar(inverse_mod(numerator(a), Integer(p_))));
    }

    /// Parses "3", "-2", "1/2" into a normalized scalar.
    Scalar parse_scalar(std::string_view text) const {
        std::string s(text);
        Scalar value;
        try {
            const auto slash = s.find('/');
            if (slash == std::string::npos) {
                value = Scalar(Integer(s));
            } else {
                Integer num(s.substr(0, slash));
                Integer den(s.substr(slash + 1));
                if (den == 0) throw std::invalid_argument("zero denominator");
                value = Scalar(num, den);
            }
        } catch (const std::exception&) {
            throw AlgebraError(ErrorCode::InvalidSpec, "malformed coefficient '" + s + "'");
        }
        return normalize(value);
    }

    friend bool operator==(const CoefficientDomain& a, const CoefficientDomain& b) {
        return a.kind_ == b.kind_ && a.p_ == b.p_;
    }

private:
    CoefficientDomain(Kind kind, std::int64_t p) : kind_(kind), p_(p) {}

    static Integer inverse_mod(const Integer& a, const Integer& m) {
        // extended Euclid
        Integer old_r = mod_floor(a, m), r = m;
        Integer old_s = 1, s = 0;
        while (r != 0) {
            Integer q = old_r / r;
            Integer tmp = old_r - q * r;
            old_r = r;
            r = tmp;
            tmp = old_s - q * s;
            old_s = s;
            s = tmp;
        }
        return mod_floor(old_s, m);
    }

    Kind kind_ = Kind::Rationals;
    std::int64_t p_ = 0;
};

inline std::string scalar_to_string(const Scalar& x) {
    return x.str();
}

} // namespace mcat
