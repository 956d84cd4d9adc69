#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "noether/abelian.hpp"
#include "noether/criteria.hpp"
#include "noether/cyclotomic.hpp"
#include "noether/scanner.hpp"

using namespace noether;

namespace {

void add_pipeline_flags(CLI::App * cmd, scanner::ScanConfig & cfg, std::string & backend)
{
    cmd->add_option("--max-degree", cfg.max_degree, "largest subfield degree to test")->check(CLI::Range(2, 1 << 20));
    cmd->add_flag("--grh", cfg.allow_grh, "accept answers that hold under GRH");
    cmd->add_option("--backend", backend, "backend command (default: $NOETHER_BACKEND)");
    cmd->add_option("--bound", cfg.certificate_bound, "coefficient bound for the certificate search")
        ->check(CLI::PositiveNumber);
}

void resolve_backend(scanner::ScanConfig & cfg, std::string const & backend)
{
    if (!backend.empty())
        cfg.backend = backend;
    else if (char const * env = std::getenv("NOETHER_BACKEND"); env && *env)
        cfg.backend = env;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Noether's problem for cyclic groups of prime order"};
    app.require_subcommand(1);

    scanner::ScanConfig cfg;
    std::string backend;

    std::uint64_t p = 0;
    auto * classify = app.add_subcommand("classify", "classify one prime");
    classify->add_option("p", p, "prime")->required();
    add_pipeline_flags(classify, cfg, backend);

    std::uint64_t from = 2, to = 2;
    std::string out_path, format = "jsonl";
    auto * scan = app.add_subcommand("scan", "classify every prime in a range");
    scan->add_option("--from", from)->required();
    scan->add_option("--to", to)->required();
    scan->add_option("--jobs", cfg.parallelism, "worker threads (0: all cores)");
    scan->add_option("--out", out_path, "output file (default: stdout)");
    scan->add_option("--format", format)->check(CLI::IsMember({"jsonl", "csv"}));
    add_pipeline_flags(scan, cfg, backend);

    std::uint64_t limit = 20000;
    auto * tables = app.add_subcommand("em-tables", "primes passing the Endo-Miyata criteria");
    tables->add_option("--limit", limit, "exclusive upper bound");

    std::uint64_t n = 0;
    int sub_degree = 2;
    auto * subfields = app.add_subcommand("subfields", "subfields of Q(zeta_n)");
    subfields->add_option("n", n)->required()->check(CLI::Range(3, 1 << 30));
    subfields->add_option("--max-degree", sub_degree)->check(CLI::PositiveNumber);

    std::string results_path;
    auto * cross = app.add_subcommand("cross-check", "validate scan results against the fixture tables");
    cross->add_option("--results", results_path)->required();

    CLI11_PARSE(app, argc, argv);
    resolve_backend(cfg, backend);

    try {
        if (*classify) {
            auto v = scanner::classify_prime(p, cfg);
            std::cout << scanner::to_json(v, true).dump() << "\n";
            return 0;
        }
        if (*scan) {
            std::ofstream file;
            std::ostream * out = &std::cout;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) {
                    std::cerr << "cannot write " << out_path << "\n";
                    return 1;
                }
                out = &file;
            }
            bool csv = format == "csv";
            if (csv)
                *out << scanner::csv_header() << "\n";
            auto summary = scanner::scan(from, to, cfg, [&](scanner::ScanRecord const & r) {
                if (csv)
                    *out << scanner::to_csv(r) << "\n";
                else
                    *out << scanner::to_json(r).dump() << "\n";
                if (!r.verdict)
                    std::cerr << "p=" << r.p << ": " << r.error << "\n";
            });
            out->flush();
            std::cerr << summary.primes << " primes";
            for (auto const & [k, c] : summary.by_status)
                std::cerr << ", " << k << " " << c;
            if (summary.errors)
                std::cerr << ", errors " << summary.errors;
            std::cerr << "\n";
            return summary.errors ? 1 : 0;
        }
        if (*tables) {
            auto [t1, t2] = criteria::em_tables(limit);
            for (auto q : t1)
                std::cout << q << "\n";
            std::cout << "\n";
            for (auto q : t2)
                std::cout << q << "\n";
            return 0;
        }
        if (*subfields) {
            for (auto const & f : cyclotomic::subfields(n, static_cast<std::uint64_t>(sub_degree)))
                std::cout << f.degree << "\t" << poly::to_string(f.minpoly) << "\n";
            return 0;
        }
        if (*cross) {
            std::ifstream in(results_path);
            if (!in) {
                std::cerr << "cannot read " << results_path << "\n";
                return 1;
            }
            auto rep = scanner::cross_check(scanner::read_records(in), criteria::embedded_fixtures());
            for (auto const & c : rep.checks) {
                std::cout << (c.passed() ? "ok   " : "FAIL ") << c.name << "\n";
                for (auto const & f : c.failures)
                    std::cout << "     " << f << "\n";
            }
            return rep.ok() ? 0 : 1;
        }
    } catch (std::exception const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
