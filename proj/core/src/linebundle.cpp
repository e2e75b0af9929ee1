#include "tango/linebundle.hpp"

namespace tango {

Int binom(long a, long b) {
    if (a < 0) throw std::invalid_argument("binom: negative a");
    if (b < 0 || b > a) return 0;
    if (b > a - b) b = a - b;
    Int r = 1;
    for (long i = 1; i <= b; ++i) {
        r *= a - b + i;
        r /= i; // exact at every step: product of i consecutive integers
    }
    return r;
}

DimValue DimValue::exact(Int v) {
    if (v < 0) throw std::invalid_argument("DimValue: negative dimension");
    DimValue d;
    d.lo = v;
    d.hi = std::move(v);
    return d;
}

DimValue DimValue::interval(Int lo, Int hi) {
    if (lo < 0 || hi < lo) throw std::invalid_argument("DimValue: bad interval");
    DimValue d;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
}

const Int& DimValue::value() const {
    if (!is_exact()) throw std::logic_error("DimValue: not exact");
    return lo;
}

DimValue operator+(const DimValue& a, const DimValue& b) {
    return DimValue::interval(a.lo + b.lo, a.hi + b.hi);
}

DimValue CohomTable::h(int i) const {
    if (i < 0 || i > n) return DimValue::exact(0);
    return dims.at(static_cast<size_t>(i));
}

bool CohomTable::all_exact() const {
    for (const auto& d : dims)
        if (!d.is_exact()) return false;
    return true;
}

bool CohomTable::euler_consistent() const {
    // Alternating sum of the intervals must cover euler.
    Int lo = 0, hi = 0;
    for (int i = 0; i <= n; ++i) {
        const DimValue& d = dims[static_cast<size_t>(i)];
        if (i % 2 == 0) {
            lo += d.lo;
            hi += d.hi;
        } else {
            lo -= d.hi;
            hi -= d.lo;
        }
    }
    return lo <= euler && euler <= hi;
}

Int h_line(int n, long d, int i) {
    if (n < 1) throw std::invalid_argument("h_line: n < 1");
    if (i < 0 || i > n) throw std::invalid_argument("h_line: i outside 0..n");
    if (i == 0) return d >= 0 ? binom(n + d, n) : 0;
    if (i == n) return d <= -n - 1 ? binom(-d - 1, n) : 0;
    return 0;
}

Int chi_line(int n, long d) {
    Int chi = 0;
    for (int i = 0; i <= n; ++i) {
        Int h = h_line(n, d, i);
        chi += (i % 2 == 0) ? h : -h;
    }
    return chi;
}

} // namespace tango
