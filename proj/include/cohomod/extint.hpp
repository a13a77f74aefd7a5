#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohomod {

/// Integer extended by -infinity, the natural value domain for degree
/// thresholds and top-degree invariants. -inf is smaller than every
/// integer; adding anything to it keeps it -inf.
struct ExtInt {
    bool finite = false;
    long v = 0;

    ExtInt() = default;  // -inf
    static ExtInt neg_inf() { return {}; }
    static ExtInt of(long x) {
        ExtInt e;
        e.finite = true;
        e.v = x;
        return e;
    }

    long value() const {
        if (!finite) throw std::logic_error("ExtInt: -inf has no value");
        return v;
    }

    ExtInt operator+(long x) const {
        return finite ? of(v + x) : neg_inf();
    }
    ExtInt operator-(long x) const { return *this + (-x); }

    bool operator==(const ExtInt& o) const {
        return finite == o.finite && (!finite || v == o.v);
    }
    bool operator!=(const ExtInt& o) const { return !(*this == o); }
    bool operator<(const ExtInt& o) const {
        if (!finite) return o.finite;
        if (!o.finite) return false;
        return v < o.v;
    }
    bool operator<=(const ExtInt& o) const { return *this < o || *this == o; }
    bool operator>(const ExtInt& o) const { return o < *this; }
    bool operator>=(const ExtInt& o) const { return o <= *this; }

    bool operator<=(long x) const { return !finite || v <= x; }
    bool operator<(long x) const { return !finite || v < x; }

    std::string str() const { return finite ? std::to_string(v) : "-inf"; }
};

inline ExtInt ext_max(const ExtInt& a, const ExtInt& b) { return a < b ? b : a; }

inline ExtInt ext_max(const std::vector<ExtInt>& xs) {
    ExtInt m = ExtInt::neg_inf();
    for (const auto& x : xs) m = ext_max(m, x);
    return m;
}

}  // namespace cohomod
