#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bonacci/dynamics.hpp"

namespace bonacci {

/// Finite-depth approximation of the tile R(base): the points
/// Phi(beta^depth y) over all y with T_S^depth y = base.
struct TileApprox {
    AlgNum base;
    int depth = 0;
    std::vector<EmbeddedPoint> points;
    std::vector<DigitWord> paths; // first `depth` symmetric digits of each y, same order as points
    ResidueClass layer;
    EventuallyPeriodic expansion; // symmetric expansion of base
};

/// All y in X_S with T_S y = x, ordered by digit.
std::vector<AlgNum> preimages(const AlgNum& x);
std::vector<AlgNum> preimages(const TransformSpec& sym, const AlgNum& x);

/// Preimage tree of x to the given depth, points sorted by digit path.
TileApprox tile_approx(const AlgNum& x, int depth, int precision_bits = default_precision_bits);

/// Layer index h in {1, ..., d-1} of a nonzero x in Z[beta] n X_S.
ResidueClass layer_of(const AlgNum& x);

struct TileSet {
    std::vector<AlgNum> tiles;             // sorted, distinct
    std::vector<std::size_t> multiplicity; // number of y in P giving each tile
    int k = 0;
};

/// Tile membership at lattice points via x = T_S^k(y + beta^-k z), y in P.
/// Holds the periodic points and their periods for one context.
class TileOracle {
  public:
    explicit TileOracle(ContextPtr ctx);

    const ContextPtr& context() const noexcept { return ctx_; }
    const std::vector<AlgNum>& periodic() const noexcept { return points_; }
    int cap() const noexcept { return cap_; }
    void set_cap(int cap) { cap_ = cap; }

    int find_prefix_k(const AlgNum& z) const;
    TileSet tiles_containing(const AlgNum& z) const;

  private:
    bool prefix_ok(const AlgNum& z, int k) const;

    ContextPtr ctx_;
    TransformSpec sym_;
    std::vector<AlgNum> points_;
    std::vector<std::size_t> periods_;
    int cap_;
};

int find_prefix_k(const AlgNum& z);
std::vector<AlgNum> tiles_containing(const AlgNum& z);

struct CoverSample {
    AlgNum z;
    std::vector<AlgNum> tiles;
    std::vector<ResidueClass> layers; // sorted multiset, one entry per tile
    std::size_t raw_count = 0;        // before merging duplicates
    int k = 0;
    bool all_layers = false;
    bool layer_unique = false; // no layer repeated (checked where the count is d-1)
};

struct CoveringReport {
    int d = 0;
    std::vector<CoverSample> samples;
    std::map<std::size_t, std::size_t> histogram; // tile count -> frequency
    std::size_t min_count = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

CoveringReport covering_report(const ContextPtr& ctx, std::size_t n_samples, int coeff_bound = 3,
                               std::uint64_t seed = 0);
CoveringReport covering_report(int d, std::size_t n_samples, int coeff_bound = 3, std::uint64_t seed = 0);

struct Witness {
    AlgNum z;
    std::vector<EventuallyPeriodic> expected; // index h-1 belongs to layer h
};

/// z = sum_{j=0}^{d-2} beta^{jd} and the d-1 expansions (0^{d-h-1} 1 0^{h-1} -1)^omega.
Witness canonical_witness(const ContextPtr& ctx);

/// Diagnostic only: Euclidean distance from p to the nearest cloud point.
double nearest_point_distance(const TileApprox& tile, const std::vector<double>& p);

} // namespace bonacci
