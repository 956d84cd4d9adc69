#ifndef NOETHER_ABELIAN_HPP
#define NOETHER_ABELIAN_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace noether::abelian {

/*
 * (Z/nZ)^* as a product of cyclic groups of orders d_1, ..., d_k with
 * d_{i+1} | d_i, each with an explicit generator residue.
 */
struct UnitGroup {
    std::uint64_t modulus = 0;
    std::vector<std::uint64_t> cyclic_orders;
    std::vector<std::uint64_t> generators;

    std::uint64_t order() const;
    std::size_t rank() const { return cyclic_orders.size(); }

    /* prod g_i^{e_i} mod n */
    std::uint64_t residue(std::vector<std::uint64_t> const & exponents) const;

    bool operator==(UnitGroup const &) const = default;
};

/*
 * A subgroup, stored as the lattice L with diag(d) Z^k <= L <= Z^k of
 * exponent vectors. hnf is the upper-triangular column Hermite normal form
 * of L: hnf[i][j] is row i of column j, hnf[i][j] = 0 for i > j, diagonal
 * positive, and 0 <= hnf[i][j] < hnf[i][i] for j > i.
 */
struct Subgroup {
    UnitGroup parent;
    std::vector<std::vector<std::uint64_t>> hnf;
    std::uint64_t index = 1;

    std::uint64_t modulus() const { return parent.modulus; }
    std::uint64_t order() const { return parent.order() / index; }

    /* Residues of the HNF columns; they generate the subgroup. */
    std::vector<std::uint64_t> generator_residues() const;

    bool operator==(Subgroup const &) const = default;
};

/* Throws std::invalid_argument for n < 3. */
UnitGroup unit_group(std::uint64_t n);

/*
 * Every subgroup exactly once (those of index <= max_index when given),
 * ordered by index, then by the row-major HNF entries.
 */
std::vector<Subgroup> subgroups(UnitGroup const & g,
                                std::optional<std::uint64_t> max_index = std::nullopt);

/* Sorted residues of the subgroup. */
std::vector<std::uint64_t> elements(Subgroup const & h);

/* The whole group and the trivial subgroup. */
Subgroup full_subgroup(UnitGroup const & g);
Subgroup trivial_subgroup(UnitGroup const & g);

} // namespace noether::abelian

#endif
