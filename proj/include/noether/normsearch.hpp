#ifndef NOETHER_NORMSEARCH_HPP
#define NOETHER_NORMSEARCH_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "noether/poly.hpp"
#include "noether/quadforms.hpp"

namespace noether::normsearch {

using poly::ZPoly;
using quadforms::NormOutcome;

/* N(alpha) = target with alpha in Z[theta], theta a root of minpoly. */
struct NormProblem {
    ZPoly minpoly; // monic, squarefree
    mpz_class target;
};

/* Product of a over the roots of the monic g: Res(g, a). */
mpz_class norm_of(ZPoly const & g, ZPoly const & a);

struct SearchLimits {
    std::uint64_t max_candidates = 20'000'000;
};

/*
 * Looks for a with coefficients in [-bound, bound] and norm_of(g, a) ==
 * target. Candidates are visited by height, then by number of nonzero
 * coefficients, so small sparse elements come first. A miss proves
 * nothing. Candidates are screened by their norm modulo two primes at
 * which g splits; only exact matches of both residues reach the exact
 * resultant.
 */
std::optional<ZPoly> certificate_search(NormProblem const & prob, std::int64_t bound,
                                        SearchLimits const & limits = {});

/*
 * Roots of g modulo a prime l, when g splits into distinct linear factors
 * there; otherwise nullopt.
 */
std::optional<std::vector<std::uint64_t>> split_roots_mod(ZPoly const & g, std::uint64_t l);

struct BackendDecision {
    NormOutcome outcome = NormOutcome::Unknown;
    ZPoly witness;
    bool certified = false;
    bool grh = false;

    /* the backend answered Unsolvable, but only conditionally and GRH was not allowed */
    bool downgraded = false;
};

class BackendError : public std::runtime_error
{
  public:
    enum class Kind { Unavailable, ProcessFailure, MalformedResponse, VerificationFailed };

    BackendError(Kind kind, std::string const & what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

/*
 * One backend child process, started with /bin/sh -c command and spoken to
 * with one JSON object per line on its standard streams. Not thread-safe;
 * use one client per thread.
 */
class BackendClient
{
  public:
    explicit BackendClient(std::string command);
    ~BackendClient();
    BackendClient(BackendClient const &) = delete;
    BackendClient & operator=(BackendClient const &) = delete;

    std::string const & command() const { return command_; }

    /* Sends one request and returns the raw response line. */
    std::string exchange(std::string const & request_line);

    std::int64_t next_id() { return ++last_id_; }

  private:
    void start();
    void stop();

    std::string command_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    std::int64_t last_id_ = 0;
};

std::string encode_request(std::int64_t id, NormProblem const & prob);

/*
 * Parses and validates one response line against the problem it answers.
 * Solvable witnesses are re-verified with norm_of.
 */
BackendDecision decode_response(std::string const & line, std::int64_t id, NormProblem const & prob,
                                bool grh_allowed);

/* client == nullptr throws BackendError{Unavailable, "backend unavailable"}. */
BackendDecision backend_decide(BackendClient * client, NormProblem const & prob, bool grh_allowed);

} // namespace noether::normsearch

#endif
