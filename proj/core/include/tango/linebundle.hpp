#pragma once

#include "tango/numeric.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tango {

// C(a,b), exact; 0 when b < 0 or b > a. Throws on a < 0.
Int binom(long a, long b);

// A cohomology dimension that is either known exactly or bounded to a
// closed interval [lo, hi]. Interval(0,0) collapses to Exact(0).
struct DimValue {
    Int lo;
    Int hi;

    DimValue() : lo(0), hi(0) {}
    static DimValue exact(Int v);
    static DimValue interval(Int lo, Int hi);

    bool is_exact() const { return lo == hi; }
    const Int& value() const; // throws if not exact
    bool operator==(const DimValue& o) const = default;
};

DimValue operator+(const DimValue& a, const DimValue& b);

struct LineBundle {
    int n;
    long d;
};

// Full cohomology record of a bundle on P^n: dims[i] for i = 0..n plus
// the Euler characteristic, always exact and computed independently.
struct CohomTable {
    int n = 0;
    std::vector<DimValue> dims; // size n+1
    Int euler;

    DimValue h(int i) const; // Exact(0) outside 0..n
    bool all_exact() const;
    // True iff some selection inside the intervals has alternating sum
    // equal to euler.
    bool euler_consistent() const;
    bool operator==(const CohomTable& o) const = default;
};

// Raised when a chase contradicts the Euler characteristic or rank
// bookkeeping. Always indicates an engine bug; callers must not catch
// and continue.
struct InconsistentTable : std::logic_error {
    using std::logic_error::logic_error;
};

struct UnresolvableExpression : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// h^i(O(d)) on P^n: C(n+d,n) at i=0 for d >= 0, C(-d-1,n) at i=n for
// d <= -n-1, zero elsewhere. Throws if i outside 0..n.
Int h_line(int n, long d, int i);

// chi(O(d)) on P^n as the signed sum of h_line.
Int chi_line(int n, long d);

} // namespace tango
