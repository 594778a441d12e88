#pragma once

#include "vlab/rational.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace vlab {

using Partition = std::vector<int>;

/// All partitions of n as weakly decreasing tuples, in reverse lexicographic order
/// (n, then n-1 1, ...). partitions(0) == {{}}.
std::vector<Partition> partitions(int n);

/// Truncated Laurent series in q. Coefficients are exact for exponents in
/// [min_exponent, cutoff]; the cutoff travels with the value.
class QSeries {
public:
    QSeries(int min_exponent, int cutoff);
    QSeries(int min_exponent, int cutoff, std::vector<Rational> coefficients);

    static QSeries constant(const Rational& c, int cutoff);
    static QSeries monomial(const Rational& c, int exponent, int cutoff);
    /// sum_{n>=0} q^n up to cutoff
    static QSeries geometric(int cutoff);

    int min_exponent() const { return min_; }
    int cutoff() const { return cutoff_; }
    Rational coefficient(int exponent) const;
    void add_to(int exponent, const Rational& c);

    QSeries truncated(int cutoff) const;
    QSeries inverse() const;  // requires nonzero coefficient at min_exponent

    friend QSeries operator+(const QSeries& a, const QSeries& b);
    friend QSeries operator-(const QSeries& a, const QSeries& b);
    friend QSeries operator*(const QSeries& a, const QSeries& b);
    QSeries scaled(const Rational& s) const;

    /// Equal coefficientwise on the common exact range.
    bool agrees_with(const QSeries& other) const;

    /// Ordered (exponent, coefficient) pairs for the nonzero coefficients.
    std::vector<std::pair<int, Rational>> terms() const;
    std::string str() const;

private:
    int min_;
    int cutoff_;
    std::vector<Rational> c_;  // c_[i] is the coefficient of q^(min_ + i)
};

QSeries qseries_mul(const QSeries& a, const QSeries& b);

/// prod_{m=1..cutoff} (1 - q^m)^{-1}
QSeries partition_generating_function(int cutoff);

/// Two-variable series sum_y y^k * Q_k(q), keyed by the y exponent.
using QYSeries = std::map<int, QSeries>;

QYSeries qy_mul(const QYSeries& a, const QYSeries& b, int cutoff);
bool qy_equal(const QYSeries& a, const QYSeries& b);

}  // namespace vlab
