#ifndef NOETHER_CRITERIA_HPP
#define NOETHER_CRITERIA_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace noether::criteria {

/*
 * Endo-Miyata criteria. Both are obstructions in an imaginary quadratic
 * subfield of Q(zeta_{p-1}):
 *   (i)  p = 2q + 1, q = 3 mod 4, q squarefree, 4p - q and q + 1 not squares;
 *        Q(sqrt -q) has no integer of norm p.
 *   (ii) p = 8q + 1, q != 3 mod 4, q squarefree, p - q and p - 4q not squares;
 *        x^2 + q y^2 = p has no solution.
 */
bool em_criterion_i(std::uint64_t p);
bool em_criterion_ii(std::uint64_t p);

/* Fundamental discriminant of the obstructing field, or nullopt when p fails both. */
std::optional<std::int64_t> em_discriminant(std::uint64_t p);

/* Primes below limit passing (i), and those passing (ii). */
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> em_tables(std::uint64_t limit);

struct ResultRow {
    enum class Kind { Degrees, Rational, Undetermined };
    Kind kind = Kind::Degrees;
    int d_plus = 0, d_minus = 0;
    bool grh = false;

    bool operator==(ResultRow const &) const = default;
};

struct FixtureSets {
    /* R: rational; U: undetermined; X: not rational only under GRH */
    std::vector<std::uint64_t> R, U, X, S0, S1, T0, T1;
    std::vector<std::uint64_t> table1, table2;
    std::map<std::uint64_t, ResultRow> result_rows;
};

/* Newline-separated integers; blank lines and '#' comments are skipped. */
std::vector<std::uint64_t> parse_prime_list(std::string_view text);

/* Lines "p,d_plus,d_minus,grh", "p,RATIONAL" or "p,UNDETERMINED". */
std::map<std::uint64_t, ResultRow> parse_result_rows(std::string_view text);

/* The fixtures compiled into the library. */
FixtureSets const & embedded_fixtures();

/* Same files read from a directory (R.txt, ..., table1.txt, result_rows.csv). */
FixtureSets load_fixtures(std::filesystem::path const & dir);

bool contains(std::vector<std::uint64_t> const & sorted, std::uint64_t p);

} // namespace noether::criteria

#endif
