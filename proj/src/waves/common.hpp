#pragma once

#include <cmath>
#include <string>

#include "rinv/error.hpp"
#include "rinv/solver.hpp"

namespace rinv::detail {

[[noreturn]] inline void wave_reject(const char* family, const std::string& what)
{
    throw PreconditionError(std::string(family) + ": " + what);
}

// Central difference with a step scaled to the argument.
inline double diff(const Fn1& f, double x, double h = 1e-6)
{
    double s = h * std::max(1.0, std::abs(x));
    return (f(x + s) - f(x - s)) / (2 * s);
}

} // namespace rinv::detail
