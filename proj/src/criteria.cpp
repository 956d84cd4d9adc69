#include "noether/criteria.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "noether/arith.hpp"
#include "fixture_text.hpp"

namespace noether::criteria {

bool em_criterion_i(std::uint64_t p)
{
    if (p < 3 || p % 2 == 0)
        return false;
    std::uint64_t q = (p - 1) / 2;
    if (q % 4 != 3 || !arith::is_squarefree(q))
        return false;
    auto s = static_cast<std::int64_t>(4 * p - q);
    auto t = static_cast<std::int64_t>(q + 1);
    return !arith::is_square(s) && !arith::is_square(t);
}

bool em_criterion_ii(std::uint64_t p)
{
    if (p < 9 || (p - 1) % 8 != 0)
        return false;
    std::uint64_t q = (p - 1) / 8;
    if (q % 4 == 3 || !arith::is_squarefree(q))
        return false;
    auto s = static_cast<std::int64_t>(p - q);
    auto t = static_cast<std::int64_t>(p - 4 * q);
    return !arith::is_square(s) && !arith::is_square(t);
}

std::optional<std::int64_t> em_discriminant(std::uint64_t p)
{
    if (em_criterion_i(p))
        return -static_cast<std::int64_t>((p - 1) / 2);
    if (em_criterion_ii(p))
        return -4 * static_cast<std::int64_t>((p - 1) / 8);
    return std::nullopt;
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> em_tables(std::uint64_t limit)
{
    std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> out;
    if (limit <= 3)
        return out;
    for (std::uint64_t p : arith::primes_between(3, limit - 1)) {
        if (em_criterion_i(p))
            out.first.push_back(p);
        if (em_criterion_ii(p))
            out.second.push_back(p);
    }
    return out;
}

namespace {

std::string_view strip(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <class F>
void for_each_line(std::string_view text, F && f)
{
    std::size_t lineno = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++lineno;
        line = strip(line);
        if (line.empty() || line.front() == '#')
            continue;
        f(line, lineno);
    }
}

template <class T>
T to_int(std::string_view s, std::size_t lineno)
{
    s = strip(s);
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("fixture line " + std::to_string(lineno) + ": bad integer '" +
                                 std::string(s) + "'");
    return v;
}

std::string read_file(std::filesystem::path const & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::vector<std::uint64_t> parse_prime_list(std::string_view text)
{
    std::vector<std::uint64_t> out;
    for_each_line(text, [&](std::string_view line, std::size_t n) { out.push_back(to_int<std::uint64_t>(line, n)); });
    std::sort(out.begin(), out.end());
    return out;
}

std::map<std::uint64_t, ResultRow> parse_result_rows(std::string_view text)
{
    std::map<std::uint64_t, ResultRow> rows;
    for_each_line(text, [&](std::string_view line, std::size_t n) {
        std::vector<std::string_view> f;
        while (true) {
            auto comma = line.find(',');
            f.push_back(strip(line.substr(0, comma)));
            if (comma == std::string_view::npos)
                break;
            line.remove_prefix(comma + 1);
        }
        auto p = to_int<std::uint64_t>(f[0], n);
        ResultRow row;
        if (f.size() == 2 && f[1] == "RATIONAL") {
            row.kind = ResultRow::Kind::Rational;
        } else if (f.size() == 2 && f[1] == "UNDETERMINED") {
            row.kind = ResultRow::Kind::Undetermined;
        } else if (f.size() == 4) {
            row.d_plus = to_int<int>(f[1], n);
            row.d_minus = to_int<int>(f[2], n);
            int g = to_int<int>(f[3], n);
            if (g != 0 && g != 1)
                throw std::runtime_error("fixture line " + std::to_string(n) + ": grh flag must be 0 or 1");
            row.grh = g == 1;
        } else {
            throw std::runtime_error("fixture line " + std::to_string(n) + ": unrecognised record");
        }
        if (!rows.emplace(p, row).second)
            throw std::runtime_error("fixture line " + std::to_string(n) + ": duplicate prime");
    });
    return rows;
}

FixtureSets const & embedded_fixtures()
{
    static FixtureSets const sets = [] {
        FixtureSets s;
        s.R = parse_prime_list(fixture_text::R);
        s.U = parse_prime_list(fixture_text::U);
        s.X = parse_prime_list(fixture_text::X);
        s.S0 = parse_prime_list(fixture_text::S0);
        s.S1 = parse_prime_list(fixture_text::S1);
        s.T0 = parse_prime_list(fixture_text::T0);
        s.T1 = parse_prime_list(fixture_text::T1);
        s.table1 = parse_prime_list(fixture_text::table1);
        s.table2 = parse_prime_list(fixture_text::table2);
        s.result_rows = parse_result_rows(fixture_text::result_rows);
        return s;
    }();
    return sets;
}

FixtureSets load_fixtures(std::filesystem::path const & dir)
{
    FixtureSets s;
    auto list = [&](char const * name) { return parse_prime_list(read_file(dir / name)); };
    s.R = list("R.txt");
    s.U = list("U.txt");
    s.X = list("X.txt");
    s.S0 = list("S0.txt");
    s.S1 = list("S1.txt");
    s.T0 = list("T0.txt");
    s.T1 = list("T1.txt");
    s.table1 = list("table1.txt");
    s.table2 = list("table2.txt");
    s.result_rows = parse_result_rows(read_file(dir / "result_rows.csv"));
    return s;
}

bool contains(std::vector<std::uint64_t> const & sorted, std::uint64_t p)
{
    return std::binary_search(sorted.begin(), sorted.end(), p);
}

} // namespace noether::criteria
