// Exact non-negative rationals for configuration values such as load
// fractions and framing overhead factors.  Decimal text like "1.1" is held
// as 11/10 so that ceil(8000 * 1.1) is 8800 and not 8801.

#ifndef CTISIM_RATIO_H
#define CTISIM_RATIO_H

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ctisim {

class Ratio
{
  public:
    constexpr Ratio() = default;
    Ratio(std::uint64_t numerator, std::uint64_t denominator);

    static Ratio FromInteger(std::uint64_t value) { return Ratio(value, 1); }

    /// Parses "3", "0.15", "3/20".  Throws std::invalid_argument on
    /// malformed or negative input.
    static Ratio Parse(std::string_view text);

    std::uint64_t Numerator() const { return m_num; }
    std::uint64_t Denominator() const { return m_den; }

    bool IsZero() const { return m_num == 0; }
    double ToDouble() const { return static_cast<double>(m_num) / static_cast<double>(m_den); }

    /// floor(value * this)
    std::uint64_t MulFloor(std::uint64_t value) const;
    /// ceil(value * this)
    std::uint64_t MulCeil(std::uint64_t value) const;

    Ratio operator*(const Ratio& other) const;
    Ratio operator/(std::uint64_t divisor) const;

    /// Shortest exact decimal when the denominator allows it, else "n/d".
    std::string ToString() const;

    friend bool operator==(const Ratio& a, const Ratio& b)
    {
        return a.m_num == b.m_num && a.m_den == b.m_den;
    }
    friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

  private:
    std::uint64_t m_num{0};
    std::uint64_t m_den{1};
};

} // namespace ctisim

#endif
