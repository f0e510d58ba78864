#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tarskiq/lattice.hpp"
#include "tarskiq/rational.hpp"

namespace tarskiq {

struct GridLine {
  Point u;
  Point v;
  std::vector<Point> points;  // one per coordinate sum u.x+u.y .. v.x+v.y
};

/// L(u, v, c) for any integer c; outside [u.x+u.y, v.x+v.y] this extrapolates.
Point line_point(const Point& u, const Point& v, int c);

GridLine grid_line(const Point& u, const Point& v);

/// Chunk and region coordinates for parameter n >= 2. All sums are
/// coordinate sums x + y of lattice points in [n']^2.
class SpineGeometry {
 public:
  explicit SpineGeometry(int n);

  int n() const noexcept { return n_; }
  int n_prime() const noexcept { return n_prime_; }

  /// i in [n], j in [n+2].
  int low(int i, int j) const;
  int high(int i, int j) const;
  /// i in [n+1].
  int bound(int i) const;

  /// B^c: points with sum c and |x - y| <= n - 1, increasing x.
  std::vector<Point> boundary(int c) const;
  /// B^c_j (1-based). Throws if j is out of range.
  Point boundary_point(int c, int j) const;

  /// Chunk boundary index i with bound(i) == c, if any.
  std::optional<int> boundary_index(int c) const;

 private:
  void check_chunk(int i) const;

  int n_;
  int n_prime_;
};

struct Spine {
  std::vector<int> c_vector;
  std::vector<Point> vertices;
};

/// Splices the grid lines of the chunked construction for C in [n]^{n+1}.
Spine chunked_spine(const SpineGeometry& geo, const std::vector<int>& c);

/// Herringbone function on [side]^2: the spine vertex with coordinate sum
/// fp_sum is fixed, spine vertices step towards it, points above the spine
/// (in their column) map by (+1, -1) and points below by (-1, +1).
LatticeFn herringbone(const Spine& spine, int side, int fp_sum);

struct InstanceParams {
  std::vector<int> c;
  int i = 1;

  /// {"n": n, "C": [...], "i": i}.
  std::string sidecar_json(int n) const;
};

LatticeFn build_instance(const SpineGeometry& geo, const InstanceParams& params);

/// All n^{n+1} (n+1) parameter choices, ordered like NOS_{n+1,n}: i major,
/// then C lexicographic with C_1 most significant.
std::vector<InstanceParams> family_params(const SpineGeometry& geo);

/// The NOS_{n+1,n} instance for (C, i): block j hides * if j = i, ↑ if j < i
/// and ↓ if j > i, at position C_j.
std::string nos_correspondence(const SpineGeometry& geo, const InstanceParams& params);

/// Which endpoint of the grid lines is held fixed while the other ranges
/// over the candidates.
enum class FixedEnd { Start, End };

/// Thresholds on the x-coordinate of the moving endpoint. Bands are
/// (-inf, d1], (d1, d4], (d4, inf) for below / through / above, with the
/// through band split at d2 (next step (0,1) vs (1,0)) and at d3 (previous
/// step (-1,0) vs (0,-1)). 0 marks an empty prefix.
struct ThresholdQuad {
  int d1 = 0;
  int d2 = 0;
  int d3 = 0;
  int d4 = 0;
};

/// Computed by classifying every candidate; throws ErrorKind::CheckFailed
/// with the offending candidates if a band is not contiguous.
ThresholdQuad thresholds(const Point& fixed, FixedEnd which, const std::vector<Point>& candidates,
                         const Point& point);

struct RegionAnchor {
  int chunk = 0;   // α in [n]
  int region = 0;  // β in [n+2]
  int line = 0;    // ℓ in [n]
};

/// ℓ = w_1 - round_half_up((w_1 + w_2 - (n + 1)) / 2), after checking that w
/// lies on the grid line from B^{bound(α)}_ℓ to B^{bound(α+1)}_ℓ.
/// Region β is the one with low(α, β) < w_1 + w_2 <= high(α, β); a sum on a
/// shared region edge belongs to the lower region.
RegionAnchor region_anchor(const SpineGeometry& geo, const Point& w);

/// Whether w is on one of the grid lines spanning the chunks.
bool in_tube(const SpineGeometry& geo, const Point& w);

enum class CoverCase { Outside, Boundary, Prefix, Suffix, Chunk };

const char* cover_case_name(CoverCase c);

struct CoveringSet {
  CoverCase kind = CoverCase::Outside;
  std::vector<Point> points;
};

/// Boundary points on which any two family members that differ at `point`
/// must also differ somewhere.
CoveringSet covering_set(const SpineGeometry& geo, const Point& point);

}  // namespace tarskiq
