#ifndef NOETHER_SCANNER_HPP
#define NOETHER_SCANNER_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "noether/criteria.hpp"
#include "noether/normsearch.hpp"
#include "noether/quadforms.hpp"

namespace noether::scanner {

using poly::ZPoly;

enum class Status { Rational, NotStablyRational, Undetermined };
enum class Method { EM_I, EM_II, QUADRATIC, BACKEND, CERTIFICATE, KNOWN_TABLE };

/* One sign ruled out in one subfield. */
struct ObstructionRecord {
    enum class Source { Quadratic, Backend };

    int sign = 1;
    int degree = 2;
    Source source = Source::Quadratic;

    /* quadratic: the field and the reduced form of (sign p, b, c) that is not principal */
    std::int64_t disc = 0;
    quadforms::Obstruction reason = quadforms::Obstruction::None;
    quadforms::QuadraticForm reduced;

    /* backend: the field and the flags it answered with */
    ZPoly minpoly;
    bool certified = false;
    bool grh = false;

    bool conditional() const { return source == Source::Backend && (grh || !certified); }
};

struct Verdict {
    std::uint64_t p = 0;
    Status status = Status::Undetermined;
    std::optional<int> d_plus, d_minus;
    std::optional<Method> method;
    bool grh = false;

    /* at most one per sign, at the minimal degree */
    std::vector<ObstructionRecord> obstructions;

    /* Rational by certificate: alpha in Z[x]/(field) with norm p */
    ZPoly witness_field;
    ZPoly witness;
};

struct ScanConfig {
    int max_degree = 2;
    bool allow_grh = false;
    std::optional<std::string> backend;
    std::int64_t certificate_bound = 3;

    /* the full-field search only runs when phi(p - 1) is at most this */
    std::uint64_t certificate_max_degree = 16;
    std::uint64_t certificate_budget = 2'000'000;

    unsigned parallelism = 1;
};

std::string to_string(Status s);
std::string to_string(Method m);
Status status_from_string(std::string const & s);
Method method_from_string(std::string const & s);

/*
 * Classifies one prime. A backend, when configured and needed, is taken
 * from `client` or started for the call. Backend errors propagate.
 */
Verdict classify_prime(std::uint64_t p, ScanConfig const & cfg, normsearch::BackendClient * client = nullptr);

/* Re-checks the evidence a verdict carries; returns a description of the first problem. */
std::optional<std::string> replay(Verdict const & v);

/* A verdict or the error that replaced it. */
struct ScanRecord {
    std::uint64_t p = 0;
    std::optional<Verdict> verdict;
    std::string error;
};

struct ScanSummary {
    std::size_t primes = 0;
    std::size_t errors = 0;
    std::map<std::string, std::size_t> by_status;
    std::map<std::string, std::size_t> by_method;
};

/* Records arrive at `sink` in ascending prime order whatever cfg.parallelism is. */
ScanSummary scan(std::uint64_t from, std::uint64_t to, ScanConfig const & cfg,
                 std::function<void(ScanRecord const &)> const & sink);

/* Keys p, status, d_plus, d_minus, method, grh; `detailed` adds the evidence. */
nlohmann::json to_json(Verdict const & v, bool detailed = false);
nlohmann::json to_json(ScanRecord const & r, bool detailed = false);
ScanRecord record_from_json(nlohmann::json const & j);

std::string csv_header();
std::string to_csv(ScanRecord const & r);
ScanRecord record_from_csv(std::string const & line);

/* JSONL or CSV (detected from the first non-empty line). */
std::vector<ScanRecord> read_records(std::istream & in);

struct CheckResult {
    std::string name;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

struct CrossCheckReport {
    std::vector<CheckResult> checks;

    bool ok() const;
    CheckResult const * find(std::string const & name) const;
};

/*
 * Compares verdicts for the primes below 20000 with the fixtures. Checks:
 * coverage, rational_not_obstructed, unconditional_outside_RU,
 * degree_two_rows, undetermined_quadratic_solvable.
 */
CrossCheckReport cross_check(std::vector<ScanRecord> const & results, criteria::FixtureSets const & fx);

} // namespace noether::scanner

#endif
