#ifndef UNTANGLE_RATIONAL_HPP
#define UNTANGLE_RATIONAL_HPP

#include <gmpxx.h>

#include <cstddef>
#include <string>

#include "error.hpp"

namespace untangle {

// mpq_class keeps num/den canonical (gcd 1, den > 0) after every operation.
using Coord = mpq_class;

inline Coord make_coord(long num, long den = 1)
{
    if (den == 0)
        throw Error(ErrorCode::InvalidArgument, "zero denominator");
    Coord c(num, den);
    c.canonicalize();
    return c;
}

// Always "num/den", also for integers ("-3/1").
inline std::string to_string(const Coord& c)
{
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Coord parse_coord(const std::string& s)
{
    Coord c;
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            c = Coord(mpz_class(s), 1);
        } else {
            mpz_class den(s.substr(slash + 1));
            if (den == 0)
                throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
            c = Coord(mpz_class(s.substr(0, slash)), den);
        }
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
    }
    c.canonicalize();
    return c;
}

inline int sign(const Coord& c) { return sgn(c); }

// Bits needed for the larger of |num| and den.
inline std::size_t bit_size(const Coord& c)
{
    const std::size_t a = mpz_sizeinbase(c.get_num_mpz_t(), 2);
    const std::size_t b = mpz_sizeinbase(c.get_den_mpz_t(), 2);
    return a > b ? a : b;
}

} // namespace untangle

#endif
