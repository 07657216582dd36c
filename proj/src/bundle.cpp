#include "heightlab/bundle.hpp"

#include "heightlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace heightlab {

namespace {

constexpr int kNv = 4;

void require_p3(const ProjPoint& p, const char* what) {
    if (p.coords.size() != kNv)
        throw DimensionError(std::string(what) + ": expected a point of P^3");
}

bool is_square128(i128 v) {
    if (v < 0) return false;
    if (v == 0) return true;
    // reuse the 64-bit fast path when possible
    if (v <= std::numeric_limits<i64>::max()) return is_square64(static_cast<i64>(v));
    unsigned __int128 uv = static_cast<unsigned __int128>(v);
    double seed = std::sqrt(static_cast<double>(uv));
    i64 r = static_cast<i64>(seed);
    for (i64 c = std::max<i64>(r - 2, 0); c <= r + 2; ++c) {
        unsigned __int128 sq = static_cast<unsigned __int128>(c) * static_cast<unsigned __int128>(c);
        if (sq == uv) return true;
    }
    return false;
}

} // namespace

bool on_bundle(const BiProjPoint& p) {
    require_p3(p.x, "on_bundle");
    require_p3(p.y, "on_bundle");
    i128 acc = 0;
    for (int i = 0; i < kNv; ++i)
        acc += static_cast<i128>(p.x.coords[i]) * p.y.coords[i] * p.y.coords[i];
    return acc == 0;
}

BigInt bundle_height(const BiProjPoint& p) {
    require_p3(p.x, "bundle_height");
    require_p3(p.y, "bundle_height");
    return big_pow(BigInt(sup_norm(p.x)), 3) * big_pow(BigInt(sup_norm(p.y)), 2);
}

bool accumulating_locus_member(const BiProjPoint& p) {
    require_p3(p.x, "accumulating_locus_member");
    require_p3(p.y, "accumulating_locus_member");
    for (int l = 0; l < kNv; ++l) {
        bool others_zero = true;
        for (int i = 0; i < kNv; ++i)
            if (i != l && p.x.coords[i] != 0) {
                others_zero = false;
                break;
            }
        if (others_zero && p.y.coords[l] == 0) return true;
    }
    return false;
}

bool thin_set_member(const BiProjPoint& p) {
    require_p3(p.x, "thin_set_member");
    i128 prod = 1;
    for (int i = 0; i < kNv; ++i) prod *= p.x.coords[i];
    return prod != 0 && is_square128(prod);
}

// ---------------------------------------------------------------------------
// local solvability tables for the diagonal fiber quadric
// ---------------------------------------------------------------------------

namespace {

// table[m]: per residue signature of (x0..x3) mod m, whether
// sum x_i y_i^2 = 0 mod m has a solution with y primitive
// (some y_i odd for m = 8; y != 0 mod p for odd prime m)
struct LocalTable {
    int m;
    std::vector<bool> solvable;

    explicit LocalTable(int mod) : m(mod), solvable(static_cast<std::size_t>(mod) * mod * mod * mod) {
        std::vector<int> sq(m);
        for (int t = 0; t < m; ++t) sq[t] = t * t % m;
        for (int a0 = 0; a0 < m; ++a0)
            for (int a1 = 0; a1 < m; ++a1)
                for (int a2 = 0; a2 < m; ++a2)
                    for (int a3 = 0; a3 < m; ++a3) {
                        bool ok = false;
                        for (int y0 = 0; y0 < m && !ok; ++y0)
                            for (int y1 = 0; y1 < m && !ok; ++y1)
                                for (int y2 = 0; y2 < m && !ok; ++y2)
                                    for (int y3 = 0; y3 < m && !ok; ++y3) {
                                        bool primitive = (m == 8)
                                            ? ((y0 | y1 | y2 | y3) & 1) != 0
                                            : (y0 | y1 | y2 | y3) != 0;
                                        if (!primitive) continue;
                                        int v = (a0 * sq[y0] + a1 * sq[y1] + a2 * sq[y2] +
                                                 a3 * sq[y3]) % m;
                                        ok = v == 0;
                                    }
                        solvable[((static_cast<std::size_t>(a0) * m + a1) * m + a2) * m + a3] = ok;
                    }
    }

    bool check(const std::array<i64, 4>& x) const {
        auto r = [&](int i) { return static_cast<std::size_t>(((x[i] % m) + m) % m); };
        return solvable[((r(0) * m + r(1)) * m + r(2)) * m + r(3)];
    }
};

const std::vector<LocalTable>& local_tables() {
    static const std::vector<LocalTable> tables = [] {
        std::vector<LocalTable> t;
        for (int m : {8, 3, 5, 7}) t.emplace_back(m);
        return t;
    }();
    return tables;
}

// ---------------------------------------------------------------------------
// per-fiber point enumeration: solve one coordinate of the diagonal quadric
// ---------------------------------------------------------------------------

// Visits each primitive sign-normalized y on x0 y0^2 + ... + x3 y3^2 = 0 with
// sup norm <= Y exactly once. Visitor returns false to stop early.
template <typename Visit>
void visit_fiber_points(const std::array<i64, 4>& x, i64 Y, Visit&& visit) {
    if (Y < 1) return;
    int l = -1;
    for (int i = 0; i < kNv; ++i)
        if (x[i] != 0 && (l < 0 || iabs64(x[i]) <= iabs64(x[l]))) l = i;
    if (l < 0) throw ParameterError("fiber: zero coefficient vector");
    int pos[3];
    int np = 0;
    for (int i = 0; i < kNv; ++i)
        if (i != l) pos[np++] = i;
    const i64 xa = x[pos[0]], xb = x[pos[1]], xc = x[pos[2]], xl = x[l];
    std::array<i64, 4> y{};
    auto try_candidate = [&](i64 ya, i64 yb, i64 yc, i64 yl) -> bool {
        y[pos[0]] = ya;
        y[pos[1]] = yb;
        y[pos[2]] = yc;
        y[l] = yl;
        int first = -1;
        for (int i = 0; i < kNv; ++i)
            if (y[i] != 0) { first = i; break; }
        if (first < 0 || y[first] < 0) return true; // zero vector or wrong sign class
        i64 g = 0;
        for (int i = 0; i < kNv && g != 1; ++i) g = gcd64(g, y[i]);
        if (g != 1) return true;
        return visit(static_cast<const std::array<i64, 4>&>(y));
    };
    // sign normalization prunes only loop positions before the solved one
    for (i64 ya = (pos[0] < l ? 0 : -Y); ya <= Y; ++ya) {
        const i64 sa = xa * ya * ya;
        const bool za = ya == 0;
        for (i64 yb = ((za && pos[1] < l) ? 0 : -Y); yb <= Y; ++yb) {
            const i64 sab = sa + xb * yb * yb;
            const bool zab = za && yb == 0;
            for (i64 yc = ((zab && pos[2] < l) ? 0 : -Y); yc <= Y; ++yc) {
                const i64 v = -(sab + xc * yc * yc);
                if (v == 0) {
                    if (!try_candidate(ya, yb, yc, 0)) return;
                    continue;
                }
                if (v % xl != 0) continue;
                const i64 w = v / xl;
                if (w < 0) continue;
                if (!is_square64(w)) continue;
                const i64 r = isqrt64(w);
                if (r > Y) continue;
                if (!try_candidate(ya, yb, yc, r)) return;
                if (!try_candidate(ya, yb, yc, -r)) return;
            }
        }
    }
}

std::optional<std::array<i64, 4>> find_fiber_point(const std::array<i64, 4>& x, i64 Y) {
    std::optional<std::array<i64, 4>> found;
    visit_fiber_points(x, Y, [&](const std::array<i64, 4>& y) {
        found = y;
        return false;
    });
    return found;
}

std::string point_str(const std::array<i64, 4>& y) {
    std::string s = "(";
    for (int i = 0; i < kNv; ++i) {
        if (i) s += ":";
        s += std::to_string(y[i]);
    }
    s += ")";
    return s;
}

// no real zeros besides the origin
bool fiber_definite(const std::array<i64, 4>& x) {
    bool all_pos = x[0] > 0 && x[1] > 0 && x[2] > 0 && x[3] > 0;
    bool all_neg = x[0] < 0 && x[1] < 0 && x[2] < 0 && x[3] < 0;
    return all_pos || all_neg;
}

// modulus of the first obstructing local table, or 0
int fiber_mod_obstruction(const std::array<i64, 4>& x) {
    for (const auto& table : local_tables())
        if (!table.check(x)) return table.m;
    return 0;
}

FiberClass classify_fiber(const std::array<i64, 4>& x,
                          const std::optional<std::array<i64, 4>>& known_point,
                          i64 search_bound, i64 already_searched) {
    FiberClass fc;
    for (int i = 0; i < kNv; ++i)
        if (x[i] == 0) {
            fc.tag = FiberTag::Undetermined;
            fc.degenerate = true;
            fc.witness = "degenerate fiber: zero coefficient";
            return fc;
        }
    i128 disc = static_cast<i128>(x[0]) * x[1] * x[2] * x[3];
    if (!is_square128(disc) || disc == 0) {
        fc.tag = FiberTag::NotSplit;
        fc.witness = "nonsquare discriminant";
        return fc;
    }
    if (fiber_definite(x)) {
        fc.tag = FiberTag::NotSplit;
        fc.witness = "definite over R";
        return fc;
    }
    if (int m = fiber_mod_obstruction(x)) {
        fc.tag = FiberTag::NotSplit;
        fc.witness = "no primitive solution mod " + std::to_string(m);
        return fc;
    }
    auto pos_square = [](i64 v) { return v > 0 && is_square64(v); };
    if (pos_square(x[0]) && pos_square(x[1]) && pos_square(-x[2]) && pos_square(-x[3])) {
        fc.tag = FiberTag::SplitCertified;
        fc.witness = "x0, x1, -x2, -x3 all squares";
        return fc;
    }
    if (known_point) {
        fc.tag = FiberTag::SplitCertified;
        fc.witness = "square discriminant, rational point " + point_str(*known_point);
        return fc;
    }
    if (search_bound > already_searched) {
        if (auto p = find_fiber_point(x, search_bound)) {
            fc.tag = FiberTag::SplitCertified;
            fc.witness = "square discriminant, rational point " + point_str(*p);
            return fc;
        }
    }
    fc.tag = FiberTag::Undetermined;
    fc.witness = "square discriminant, no point found within bound " +
                 std::to_string(std::max(search_bound, already_searched));
    return fc;
}

} // namespace

FiberClass fiber_class(const ProjPoint& x, i64 point_search_bound) {
    require_p3(x, "fiber_class");
    if (point_search_bound < 0) throw ParameterError("fiber_class: negative search bound");
    std::array<i64, 4> xs{x.coords[0], x.coords[1], x.coords[2], x.coords[3]};
    return classify_fiber(xs, std::nullopt, point_search_bound, 0);
}

// ---------------------------------------------------------------------------
// bundle counting
// ---------------------------------------------------------------------------

namespace {

// largest Y with Y^2 h^3 <= B
i64 fiber_ymax(const Rational& B, i64 h) {
    BigInt cap = numerator(B) / (denominator(B) * big_pow(BigInt(h), 3));
    if (cap <= 0) return 0;
    return big_isqrt(cap).convert_to<i64>();
}

// primitive sign-normalized x in P^3 with sup norm <= X, sharded on x0
template <typename Fn>
void for_each_fiber(i64 X, int worker, int nworkers, Fn&& fn) {
    std::array<i64, 4> x{};
    for (i64 x0 = worker; x0 <= X; x0 += nworkers) {
        x[0] = x0;
        const bool z0 = x0 == 0;
        for (i64 x1 = z0 ? 0 : -X; x1 <= X; ++x1) {
            x[1] = x1;
            const bool z1 = z0 && x1 == 0;
            const i64 g1 = gcd64(x0, x1);
            for (i64 x2 = z1 ? 0 : -X; x2 <= X; ++x2) {
                x[2] = x2;
                const bool z2 = z1 && x2 == 0;
                const i64 g2 = (g1 == 1) ? 1 : gcd64(g1, x2);
                for (i64 x3 = z2 ? 1 : -X; x3 <= X; ++x3) {
                    if (g2 != 1 && gcd64(g2, x3) != 1) continue;
                    x[3] = x3;
                    fn(x);
                }
            }
        }
    }
}

int nonzero_count(const std::array<i64, 4>& x) {
    int c = 0;
    for (i64 v : x) c += v != 0;
    return c;
}

// closed-form per-grid counts for fibers whose quadric degenerates to a
// union of linear spaces (at most two nonzero coefficients)
std::vector<u64> degenerate_fiber_counts(const std::array<i64, 4>& x,
                                         const std::vector<i64>& ymax) {
    std::vector<u64> out(ymax.size(), 0);
    const int nz = nonzero_count(x);
    const HeightSpec flat(1, 1);
    const EnumStrategy naive{};
    if (nz == 1) {
        // rank 1: y_l = 0, the remaining coordinates form a P^2
        for (std::size_t j = 0; j < ymax.size(); ++j)
            if (ymax[j] >= 1)
                out[j] = count(projective_space(2), flat, Rational(ymax[j]), naive);
        return out;
    }
    // rank 2 at positions a < b
    int a = -1, b = -1;
    for (int i = 0; i < kNv; ++i)
        if (x[i] != 0) (a < 0 ? a : b) = i;
    const i64 prod = -x[a] * x[b];
    i64 m = 0;
    bool ratio_square = prod > 0 && is_square64(prod) && ((m = isqrt64(prod)), true);
    if (!ratio_square) {
        // y_a = y_b = 0: a line in the two free coordinates
        for (std::size_t j = 0; j < ymax.size(); ++j)
            if (ymax[j] >= 1)
                out[j] = count(projective_space(1), flat, Rational(ymax[j]), naive);
        return out;
    }
    // two planes y_a = +-(p/q) y_b meeting in the line y_a = y_b = 0
    const i64 g = gcd64(m, x[a]);
    const i64 p = m / g, q = iabs64(x[a]) / g;
    const i64 w = std::max(p, q);
    const HeightSpec weighted(1, Rational(w));
    for (std::size_t j = 0; j < ymax.size(); ++j) {
        if (ymax[j] < 1) continue;
        u64 plane = count(projective_space(2), weighted, Rational(ymax[j]), naive);
        u64 line = count(projective_space(1), flat, Rational(ymax[j]), naive);
        out[j] = 2 * plane - line;
    }
    return out;
}

struct WorkerTotals {
    std::vector<BundleRow> rows;
    u64 fibers_total = 0, fibers_split = 0, fibers_not_split = 0, fibers_undetermined = 0,
        fibers_degenerate = 0;
    u64 split_nonsquare = 0, thin_mismatch_points = 0;
};

} // namespace

BundleReport bundle_count(const std::vector<Rational>& grid, bool exclude_accumulating,
                          i64 point_search_bound, int workers) {
    if (grid.empty()) throw ParameterError("bundle_count: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1) throw ParameterError("bundle_count: grid bounds must be >= 1");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw ParameterError("bundle_count: grid must be strictly increasing");
    }
    if (point_search_bound < 0) throw ParameterError("bundle_count: negative search bound");
    workers = std::max(1, workers);
    local_tables(); // build before the worker threads fork

    const Rational& Btop = grid.back();
    const i64 Xmax = [&] {
        BigInt cap = numerator(Btop) / denominator(Btop);
        return big_iroot(cap, 3).convert_to<i64>();
    }();

    // ymax_by_h[h][j]: y bound for fibers of sup norm h at grid point j
    std::vector<std::vector<i64>> ymax_by_h(static_cast<std::size_t>(Xmax) + 1);
    for (i64 h = 1; h <= Xmax; ++h) {
        auto& v = ymax_by_h[static_cast<std::size_t>(h)];
        v.reserve(grid.size());
        for (const auto& B : grid) v.push_back(fiber_ymax(B, h));
    }

    auto run_worker = [&](int w, WorkerTotals& tot) {
        tot.rows.assign(grid.size(), BundleRow{});
        for_each_fiber(Xmax, w, workers, [&](const std::array<i64, 4>& x) {
            i64 h = 0;
            for (i64 v : x) h = std::max(h, iabs64(v));
            const auto& ymax = ymax_by_h[static_cast<std::size_t>(h)];
            const i64 ytop = ymax.back();
            if (ytop < 1) return;
            ++tot.fibers_total;

            const int nz = nonzero_count(x);
            const bool locus_fiber = nz == 1;
            std::vector<u64> hist(grid.size(), 0);
            std::optional<std::array<i64, 4>> witness;

            i64 searched = 0;
            if (nz <= 2) {
                hist = degenerate_fiber_counts(x, ymax); // cumulative per grid point
            } else {
                // fibers with no real or no local primitive zero carry no points
                const bool skip_loop = fiber_definite(x) || fiber_mod_obstruction(x) != 0;
                std::vector<u64> raw(grid.size(), 0);
                if (!skip_loop) {
                    visit_fiber_points(x, ytop, [&](const std::array<i64, 4>& y) {
                        i64 hy = 0;
                        for (i64 v : y) hy = std::max(hy, iabs64(v));
                        for (std::size_t j = 0; j < grid.size(); ++j)
                            if (hy <= ymax[j]) {
                                ++raw[j];
                                break;
                            }
                        if (!witness) witness = y;
                        return true;
                    });
                    searched = ytop;
                }
                u64 running = 0;
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    running += raw[j];
                    hist[j] = running;
                }
            }

            FiberClass fc = classify_fiber(x, witness, point_search_bound, searched);
            switch (fc.tag) {
                case FiberTag::SplitCertified: ++tot.fibers_split; break;
                case FiberTag::NotSplit: ++tot.fibers_not_split; break;
                case FiberTag::Undetermined:
                    ++tot.fibers_undetermined;
                    if (fc.degenerate) ++tot.fibers_degenerate;
                    break;
            }

            i128 prod = static_cast<i128>(x[0]) * x[1] * x[2] * x[3];
            const bool thin = prod != 0 && is_square128(prod);
            // independent recheck with a bignum square root
            BigInt disc_big = BigInt(x[0]) * x[1] * x[2] * x[3];
            bool disc_square = disc_big > 0 && big_isqrt(disc_big) * big_isqrt(disc_big) == disc_big;
            if (fc.tag == FiberTag::SplitCertified && !disc_square) ++tot.split_nonsquare;
            if (thin != disc_square) tot.thin_mismatch_points += hist.back();
            const bool included = !(exclude_accumulating && locus_fiber);
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const u64 nj = hist[j];
                if (nj == 0) continue;
                if (locus_fiber) tot.rows[j].on_accumulating += nj;
                if (!included) continue;
                tot.rows[j].total += nj;
                if (thin) tot.rows[j].thin_members += nj;
                switch (fc.tag) {
                    case FiberTag::SplitCertified: tot.rows[j].on_split_certified += nj; break;
                    case FiberTag::NotSplit: tot.rows[j].on_not_split += nj; break;
                    case FiberTag::Undetermined: tot.rows[j].on_undetermined += nj; break;
                }
            }
        });
    };

    std::vector<WorkerTotals> totals(workers);
    if (workers == 1) {
        run_worker(0, totals[0]);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w)
            threads.emplace_back([&, w] { run_worker(w, totals[w]); });
        for (auto& t : threads) t.join();
    }

    BundleReport report;
    report.exclude_accumulating = exclude_accumulating;
    report.point_search_bound = point_search_bound;
    report.rows.assign(grid.size(), BundleRow{});
    for (std::size_t j = 0; j < grid.size(); ++j) report.rows[j].B = grid[j];
    for (const auto& tot : totals) {
        report.fibers_total += tot.fibers_total;
        report.fibers_split_certified += tot.fibers_split;
        report.fibers_not_split += tot.fibers_not_split;
        report.fibers_undetermined += tot.fibers_undetermined;
        report.fibers_degenerate += tot.fibers_degenerate;
        report.split_fibers_nonsquare_disc += tot.split_nonsquare;
        report.thin_disc_mismatch_points += tot.thin_mismatch_points;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            report.rows[j].total += tot.rows[j].total;
            report.rows[j].on_split_certified += tot.rows[j].on_split_certified;
            report.rows[j].on_not_split += tot.rows[j].on_not_split;
            report.rows[j].on_undetermined += tot.rows[j].on_undetermined;
            report.rows[j].on_accumulating += tot.rows[j].on_accumulating;
            report.rows[j].thin_members += tot.rows[j].thin_members;
        }
    }
    return report;
}

CountSeries fiber_count_series(const ProjPoint& x, const std::vector<Rational>& grid) {
    require_p3(x, "fiber_count_series");
    if (grid.empty()) throw ParameterError("fiber_count_series: empty grid");
    std::array<i64, 4> xs{x.coords[0], x.coords[1], x.coords[2], x.coords[3]};
    i64 h = sup_norm(x);
    std::vector<i64> ymax;
    for (const auto& B : grid) ymax.push_back(fiber_ymax(B, h));
    CountSeries out;
    out.grid = grid;
    out.region = "fiber " + x.str();
    out.counts.assign(grid.size(), 0);
    std::vector<u64> raw(grid.size(), 0);
    if (ymax.back() >= 1)
        visit_fiber_points(xs, ymax.back(), [&](const std::array<i64, 4>& y) {
            i64 hy = 0;
            for (i64 v : y) hy = std::max(hy, iabs64(v));
            for (std::size_t j = 0; j < grid.size(); ++j)
                if (hy <= ymax[j]) {
                    ++raw[j];
                    break;
                }
            return true;
        });
    u64 running = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        running += raw[j];
        out.counts[j] = running;
    }
    return out;
}

std::vector<BiProjPoint> enumerate_bundle_points(const Rational& B) {
    if (B < 1) throw ParameterError("enumerate_bundle_points: B must be >= 1");
    const i64 Xmax = big_iroot(numerator(B) / denominator(B), 3).convert_to<i64>();
    std::vector<BiProjPoint> out;
    for_each_fiber(Xmax, 0, 1, [&](const std::array<i64, 4>& x) {
        i64 h = 0;
        for (i64 v : x) h = std::max(h, iabs64(v));
        const i64 Y = fiber_ymax(B, h);
        if (Y < 1) return;
        ProjPoint px(std::vector<i64>(x.begin(), x.end()));
        visit_fiber_points(x, Y, [&](const std::array<i64, 4>& y) {
            out.push_back({px, ProjPoint(std::vector<i64>(y.begin(), y.end()))});
            return true;
        });
    });
    return out;
}

} // namespace heightlab
