#include "vlab/qseries.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace vlab {

namespace {

void partitions_rec(int remaining, int max_part, Partition& current, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(current);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        current.push_back(part);
        partitions_rec(remaining - part, part, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions(int n) {
    if (n < 0) throw std::invalid_argument("partitions of a negative integer");
    std::vector<Partition> out;
    Partition current;
    partitions_rec(n, n, current, out);
    return out;
}

QSeries::QSeries(int min_exponent, int cutoff) : min_(min_exponent), cutoff_(cutoff) {
    if (cutoff_ >= min_) c_.assign(static_cast<std::size_t>(cutoff_ - min_ + 1), Rational(0));
}

QSeries::QSeries(int min_exponent, int cutoff, std::vector<Rational> coefficients)
    : QSeries(min_exponent, cutoff) {
    for (std::size_t i = 0; i < coefficients.size() && i < c_.size(); ++i) c_[i] = coefficients[i];
}

QSeries QSeries::constant(const Rational& c, int cutoff) { return monomial(c, 0, cutoff); }

QSeries QSeries::monomial(const Rational& c, int exponent, int cutoff) {
    QSeries s(std::min(exponent, cutoff + 1), cutoff);
    if (exponent <= cutoff) s.add_to(exponent, c);
    return s;
}

QSeries QSeries::geometric(int cutoff) {
    QSeries s(0, cutoff);
    for (auto& x : s.c_) x = Rational(1);
    return s;
}

Rational QSeries::coefficient(int exponent) const {
    if (exponent > cutoff_) throw std::out_of_range("coefficient beyond series cutoff");
    if (exponent < min_) return Rational(0);
    return c_[static_cast<std::size_t>(exponent - min_)];
}

void QSeries::add_to(int exponent, const Rational& c) {
    if (exponent > cutoff_) return;
    if (exponent < min_) {
        std::vector<Rational> grown(static_cast<std::size_t>(min_ - exponent), Rational(0));
        grown.insert(grown.end(), c_.begin(), c_.end());
        c_ = std::move(grown);
        min_ = exponent;
    }
    c_[static_cast<std::size_t>(exponent - min_)] += c;
}

QSeries QSeries::truncated(int cutoff) const {
    QSeries s(min_, std::min(cutoff, cutoff_));
    for (int e = min_; e <= s.cutoff_; ++e) s.c_[static_cast<std::size_t>(e - min_)] = coefficient(e);
    return s;
}

QSeries operator+(const QSeries& a, const QSeries& b) {
    QSeries s(std::min(a.min_, b.min_), std::min(a.cutoff_, b.cutoff_));
    for (int e = s.min_; e <= s.cutoff_; ++e) s.add_to(e, a.coefficient(e) + b.coefficient(e));
    return s;
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + b.scaled(Rational(-1)); }

QSeries QSeries::scaled(const Rational& s) const {
    QSeries out = *this;
    for (auto& x : out.c_) x *= s;
    return out;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
    // Coefficient e of the product is exact while both partial ranges are exact.
    int cutoff = std::min(a.cutoff_ + b.min_, b.cutoff_ + a.min_);
    QSeries s(a.min_ + b.min_, cutoff);
    for (int i = a.min_; i <= a.cutoff_; ++i) {
        const Rational& x = a.c_[static_cast<std::size_t>(i - a.min_)];
        if (x.is_zero()) continue;
        for (int j = b.min_; j <= b.cutoff_ && i + j <= cutoff; ++j) {
            const Rational& y = b.c_[static_cast<std::size_t>(j - b.min_)];
            if (!y.is_zero()) s.c_[static_cast<std::size_t>(i + j - s.min_)] += x * y;
        }
    }
    return s;
}

QSeries qseries_mul(const QSeries& a, const QSeries& b) { return a * b; }

QSeries QSeries::inverse() const {
    int lead = min_;
    while (lead <= cutoff_ && coefficient(lead).is_zero()) ++lead;
    if (lead > cutoff_) throw std::domain_error("inverse of a series with no nonzero coefficient");
    // (q^lead * u)^{-1} = q^{-lead} u^{-1}, u has nonzero constant term.
    int span = cutoff_ - lead;
    std::vector<Rational> u(static_cast<std::size_t>(span + 1));
    for (int i = 0; i <= span; ++i) u[i] = coefficient(lead + i);
    std::vector<Rational> v(static_cast<std::size_t>(span + 1), Rational(0));
    Rational inv0 = Rational(1) / u[0];
    v[0] = inv0;
    for (int n = 1; n <= span; ++n) {
        Rational acc(0);
        for (int k = 1; k <= n; ++k) acc += u[k] * v[n - k];
        v[n] = -acc * inv0;
    }
    return QSeries(-lead, -lead + span, std::move(v));
}

bool QSeries::agrees_with(const QSeries& other) const {
    int top = std::min(cutoff_, other.cutoff_);
    int lo = std::min(min_, other.min_);
    for (int e = lo; e <= top; ++e)
        if (coefficient(e) != other.coefficient(e)) return false;
    return true;
}

std::vector<std::pair<int, Rational>> QSeries::terms() const {
    std::vector<std::pair<int, Rational>> out;
    for (int e = min_; e <= cutoff_; ++e)
        if (!coefficient(e).is_zero()) out.emplace_back(e, coefficient(e));
    return out;
}

std::string QSeries::str() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& [e, c] : terms()) {
        os << (first ? "" : ", ") << "(" << e << ", " << c << ")";
        first = false;
    }
    os << "] + O(q^" << cutoff_ + 1 << ")";
    return os.str();
}

QSeries partition_generating_function(int cutoff) {
    QSeries acc = QSeries::constant(Rational(1), cutoff);
    for (int m = 1; m <= cutoff; ++m) {
        QSeries factor = QSeries::constant(Rational(1), cutoff);
        factor.add_to(m, Rational(-1));
        acc = acc * factor.inverse();
    }
    return acc;
}

QYSeries qy_mul(const QYSeries& a, const QYSeries& b, int cutoff) {
    QYSeries out;
    for (const auto& [ya, sa] : a)
        for (const auto& [yb, sb] : b) {
            QSeries p = (sa * sb).truncated(cutoff);
            auto it = out.find(ya + yb);
            if (it == out.end())
                out.emplace(ya + yb, p);
            else
                it->second = it->second + p;
        }
    return out;
}

bool qy_equal(const QYSeries& a, const QYSeries& b) {
    auto nonzero = [](const QSeries& s) { return !s.terms().empty(); };
    for (const auto& [y, s] : a) {
        auto it = b.find(y);
        if (it == b.end()) {
            if (nonzero(s)) return false;
        } else if (!s.agrees_with(it->second)) {
            return false;
        }
    }
    for (const auto& [y, s] : b)
        if (!a.count(y) && nonzero(s)) return false;
    return true;
}

}  // namespace vlab
