#include "ctisim/ratio.h"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace ctisim {

namespace {

std::uint64_t
ParseUnsigned(std::string_view digits, std::string_view whole)
{
    if (digits.empty())
    {
        throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
    {
        throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
    }
    return value;
}

} // namespace

Ratio::Ratio(std::uint64_t numerator, std::uint64_t denominator)
    : m_num(numerator),
      m_den(denominator)
{
    if (denominator == 0)
    {
        throw std::invalid_argument("zero denominator");
    }
    std::uint64_t g = std::gcd(m_num, m_den);
    if (g > 1)
    {
        m_num /= g;
        m_den /= g;
    }
}

Ratio
Ratio::Parse(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
    {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '-')
    {
        throw std::invalid_argument("negative value: '" + std::string(text) + "'");
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos)
    {
        std::uint64_t n = ParseUnsigned(text.substr(0, slash), text);
        std::uint64_t d = ParseUnsigned(text.substr(slash + 1), text);
        if (d == 0)
        {
            throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
        }
        return Ratio(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string_view::npos)
    {
        return Ratio(ParseUnsigned(text, text), 1);
    }
    std::string_view intPart = text.substr(0, dot);
    std::string_view fracPart = text.substr(dot + 1);
    if (fracPart.size() > 18 || (intPart.empty() && fracPart.empty()))
    {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < fracPart.size(); ++i)
    {
        scale *= 10;
    }
    std::uint64_t whole = intPart.empty() ? 0 : ParseUnsigned(intPart, text);
    std::uint64_t frac = fracPart.empty() ? 0 : ParseUnsigned(fracPart, text);
    unsigned __int128 n = static_cast<unsigned __int128>(whole) * scale + frac;
    if (n > UINT64_MAX)
    {
        throw std::invalid_argument("value out of range: '" + std::string(text) + "'");
    }
    return Ratio(static_cast<std::uint64_t>(n), scale);
}

std::uint64_t
Ratio::MulFloor(std::uint64_t value) const
{
    unsigned __int128 p = static_cast<unsigned __int128>(value) * m_num;
    return static_cast<std::uint64_t>(p / m_den);
}

std::uint64_t
Ratio::MulCeil(std::uint64_t value) const
{
    unsigned __int128 p = static_cast<unsigned __int128>(value) * m_num;
    return static_cast<std::uint64_t>((p + m_den - 1) / m_den);
}

Ratio
Ratio::operator*(const Ratio& other) const
{
    // Cross-reduce first so the products stay in range for config-sized values.
    std::uint64_t g1 = std::gcd(m_num, other.m_den);
    std::uint64_t g2 = std::gcd(other.m_num, m_den);
    if (g1 == 0)
    {
        g1 = 1;
    }
    if (g2 == 0)
    {
        g2 = 1;
    }
    unsigned __int128 n = static_cast<unsigned __int128>(m_num / g1) * (other.m_num / g2);
    unsigned __int128 d = static_cast<unsigned __int128>(m_den / g2) * (other.m_den / g1);
    if (n > UINT64_MAX || d > UINT64_MAX)
    {
        throw std::overflow_error("ratio product overflow");
    }
    return Ratio(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d));
}

Ratio
Ratio::operator/(std::uint64_t divisor) const
{
    if (divisor == 0)
    {
        throw std::invalid_argument("division by zero");
    }
    std::uint64_t g = std::gcd(m_num, divisor);
    if (g == 0)
    {
        g = 1;
    }
    unsigned __int128 d = static_cast<unsigned __int128>(m_den) * (divisor / g);
    if (d > UINT64_MAX)
    {
        throw std::overflow_error("ratio quotient overflow");
    }
    return Ratio(m_num / g, static_cast<std::uint64_t>(d));
}

std::string
Ratio::ToString() const
{
    std::uint64_t d = m_den;
    unsigned twos = 0;
    unsigned fives = 0;
    while (d % 2 == 0)
    {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0)
    {
        d /= 5;
        ++fives;
    }
    if (d != 1)
    {
        return std::to_string(m_num) + "/" + std::to_string(m_den);
    }
    unsigned digits = twos > fives ? twos : fives;
    unsigned __int128 scale = 1;
    for (unsigned i = 0; i < digits; ++i)
    {
        scale *= 10;
    }
    unsigned __int128 scaled = static_cast<unsigned __int128>(m_num) * (scale / m_den);
    auto whole = static_cast<std::uint64_t>(scaled / scale);
    auto frac = static_cast<std::uint64_t>(scaled % scale);
    std::string out = std::to_string(whole);
    if (digits > 0)
    {
        std::string f = std::to_string(frac);
        out += "." + std::string(digits - f.size(), '0') + f;
    }
    return out;
}

std::strong_ordering
operator<=>(const Ratio& a, const Ratio& b)
{
    unsigned __int128 l = static_cast<unsigned __int128>(a.m_num) * b.m_den;
    unsigned __int128 r = static_cast<unsigned __int128>(b.m_num) * a.m_den;
    if (l < r)
    {
        return std::strong_ordering::less;
    }
    if (l > r)
    {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

} // namespace ctisim
