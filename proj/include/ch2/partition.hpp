#pragma once

namespace ch2 {

/// The partition function chi: 0 on (-inf, 0], 1 on [1, inf), and the quintic
/// smoothstep 6x^5 - 15x^4 + 10x^3 in between. chi' and chi'' vanish at both
/// ends, so chi is C^2 on the whole line.
namespace partition {

double chi(double x);
double dchi(double x);
double d2chi(double x);

}  // namespace partition
}  // namespace ch2
