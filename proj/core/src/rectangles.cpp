#include "oneway/rectangles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <span>

#include <json.hpp>

#include "oneway/errors.hpp"

namespace oneway {

using nlohmann::json;

namespace {

void check_pair(const FunctionTable& f, const JointDistribution& mu, const char* op) {
    f.validate();
    mu.validate();
    if (f.x_size != mu.x_size || f.y_size != mu.y_size)
        throw validation_error(std::string(op) + ": table is " + std::to_string(f.x_size) +
                               "x" + std::to_string(f.y_size) + " but distribution is " +
                               std::to_string(mu.x_size) + "x" + std::to_string(mu.y_size));
}

// Tallies for one rectangle S x Y: per-column mass by concrete output value,
// per-column undefined-cell mass, and the total rectangle mass.
struct Tallies {
    int y_size, z_size;
    std::vector<double> concrete; // y * z_size + z
    std::vector<double> star;     // y
    double mass = 0.0;

    Tallies(int ys, int zs)
        : y_size(ys), z_size(zs),
          concrete(static_cast<std::size_t>(ys) * zs, 0.0), star(ys, 0.0) {}

    void toggle(const FunctionTable& f, const JointDistribution& mu, int x, double sign) {
        for (int y = 0; y < y_size; ++y) {
            const double w = sign * mu.at(x, y);
            const int v = f.at(x, y);
            if (v == FunctionTable::kStar) star[y] += w;
            else concrete[static_cast<std::size_t>(y) * z_size + v] += w;
            mass += w;
        }
    }

    // 1 - (sum over columns of the best response score) / mass.
    double error() const {
        double best_total = 0.0;
        for (int y = 0; y < y_size; ++y) {
            double best = 0.0;
            const double* c = concrete.data() + static_cast<std::size_t>(y) * z_size;
            for (int z = 0; z < z_size; ++z) best = std::max(best, c[z]);
            best_total += best + star[y];
        }
        return 1.0 - best_total / mass;
    }
};

BestResponse best_response_checked(const FunctionTable& f, const JointDistribution& mu,
                                   std::span<const int> rows) {
    Tallies t(f.y_size, f.z_size);
    for (int x : rows) {
        if (x < 0 || x >= f.x_size)
            throw validation_error("best_response: row " + std::to_string(x) + " out of range");
        t.toggle(f, mu, x, 1.0);
    }
    if (!(t.mass > 0.0))
        throw validation_error("best_response: rectangle has zero mass");
    BestResponse out;
    out.mass = t.mass;
    out.response.resize(f.y_size);
    double best_total = 0.0;
    for (int y = 0; y < f.y_size; ++y) {
        int best_z = 0;
        double best = t.concrete[static_cast<std::size_t>(y) * f.z_size];
        for (int z = 1; z < f.z_size; ++z) {
            const double c = t.concrete[static_cast<std::size_t>(y) * f.z_size + z];
            if (c > best) { best = c; best_z = z; }
        }
        out.response[y] = best_z;
        best_total += best + t.star[y];
    }
    out.error = 1.0 - best_total / t.mass;
    return out;
}

std::vector<int> mask_to_rows(std::uint64_t mask) {
    std::vector<int> rows;
    while (mask) {
        rows.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return rows;
}

RectangleCertificate make_certificate(const FunctionTable& f, const JointDistribution& mu,
                                      const std::vector<int>& rows) {
    const auto br = best_response_checked(f, mu, rows);
    RectangleCertificate cert;
    cert.rows = rows;
    cert.response = br.response;
    cert.error = br.error;
    cert.mass = br.mass;
    cert.value_bits = -std::log2(br.mass);
    if (std::abs(cert.value_bits) < 1e-12) cert.value_bits = 0.0; // and normalize -0
    return cert;
}

struct SearchBest {
    bool found = false;
    double mass = 0.0;
    double error = 0.0;
    std::vector<int> rows;
};

void consider(SearchBest& best, const FunctionTable& f, const JointDistribution& mu,
              double eps, std::uint64_t mask) {
    // Exact re-evaluation: incremental tallies are only a filter, the
    // candidate is recomputed from scratch before it can become the best.
    auto rows = mask_to_rows(mask);
    Tallies t(f.y_size, f.z_size);
    for (int x : rows) t.toggle(f, mu, x, 1.0);
    if (!(t.mass > 0.0)) return;
    const double err = t.error();
    if (err > eps + 1e-12) return;
    if (!best.found || t.mass > best.mass ||
        (t.mass == best.mass &&
         std::lexicographical_compare(rows.begin(), rows.end(),
                                      best.rows.begin(), best.rows.end()))) {
        best.found = true;
        best.mass = t.mass;
        best.error = err;
        best.rows = std::move(rows);
    }
}

// Enumerate all subsets with the given fixed high part over low_bits Gray-coded
// low rows. The empty combined subset is skipped.
SearchBest search_partition(const FunctionTable& f, const JointDistribution& mu,
                            double eps, std::uint64_t high_mask, int low_bits) {
    SearchBest best;
    Tallies t(f.y_size, f.z_size);
    for (int x : mask_to_rows(high_mask)) t.toggle(f, mu, x, 1.0);

    std::uint64_t gray = 0;
    const std::uint64_t count = std::uint64_t{1} << low_bits;
    // i = 0 is the bare high part.
    if (high_mask != 0 && t.mass > 0.0 && t.error() <= eps + 1e-9)
        consider(best, f, mu, eps, high_mask);
    for (std::uint64_t i = 1; i < count; ++i) {
        const int flip = std::countr_zero(i);
        const std::uint64_t bit = std::uint64_t{1} << flip;
        gray ^= bit;
        t.toggle(f, mu, flip, (gray & bit) ? 1.0 : -1.0);
        if ((i & 0xffffu) == 0) {
            // Rebuild tallies periodically to bound incremental drift.
            Tallies fresh(f.y_size, f.z_size);
            for (int x : mask_to_rows(high_mask | gray)) fresh.toggle(f, mu, x, 1.0);
            t = std::move(fresh);
        }
        const std::uint64_t mask = high_mask | gray;
        if (!(t.mass > 0.0)) continue;
        if (t.mass + 1e-9 < best.mass) continue;
        if (t.error() > eps + 1e-9) continue;
        consider(best, f, mu, eps, mask);
    }
    return best;
}

} // namespace

BestResponse best_response(const FunctionTable& f, const JointDistribution& mu,
                           std::span<const int> rows) {
    check_pair(f, mu, "best_response");
    return best_response_checked(f, mu, rows);
}

bool certificate_valid(const RectangleCertificate& cert, const FunctionTable& f,
                       const JointDistribution& mu, double tol) {
    if (cert.rows.empty()) return false;
    if (static_cast<int>(cert.response.size()) != f.y_size) return false;
    double mass = 0.0, agree = 0.0;
    for (int x : cert.rows) {
        if (x < 0 || x >= f.x_size) return false;
        for (int y = 0; y < f.y_size; ++y) {
            const double w = mu.at(x, y);
            mass += w;
            const int v = f.at(x, y);
            if (v == FunctionTable::kStar || v == cert.response[y]) agree += w;
        }
    }
    if (!(mass > 0.0)) return false;
    const double err = 1.0 - agree / mass;
    return std::abs(err - cert.error) <= tol &&
           std::abs(mass - cert.mass) <= tol &&
           std::abs(-std::log2(mass) - cert.value_bits) <= 1e-9;
}

RectangleCertificate rec_exact(const FunctionTable& f, const JointDistribution& mu,
                               double eps, const RectangleOptions& opts) {
    check_pair(f, mu, "rec_exact");
    if (!(eps >= 0.0 && eps < 1.0))
        throw validation_error("rec_exact: eps must be in [0,1)");
    if (f.x_size > opts.max_rows || f.x_size > 62)
        throw cap_error("rec_exact: enumeration capped at x_size <= " +
                        std::to_string(std::min(opts.max_rows, 62)) + " (got " +
                        std::to_string(f.x_size) + ")");

    const int n = f.x_size;
    int prefix_bits = 0;
    if (opts.threads > 1) {
        while ((1 << prefix_bits) < opts.threads && prefix_bits < n - 1) ++prefix_bits;
    }
    const int low_bits = n - prefix_bits;

    std::vector<SearchBest> partials;
    if (prefix_bits == 0) {
        partials.push_back(search_partition(f, mu, eps, 0, n));
    } else {
        std::vector<std::future<SearchBest>> futs;
        for (int h = 0; h < (1 << prefix_bits); ++h) {
            const std::uint64_t high = static_cast<std::uint64_t>(h) << low_bits;
            futs.push_back(std::async(std::launch::async, [&, high] {
                return search_partition(f, mu, eps, high, low_bits);
            }));
        }
        for (auto& fu : futs) partials.push_back(fu.get());
    }

    SearchBest best;
    for (auto& part : partials) {
        if (!part.found) continue;
        if (!best.found || part.mass > best.mass ||
            (part.mass == best.mass &&
             std::lexicographical_compare(part.rows.begin(), part.rows.end(),
                                          best.rows.begin(), best.rows.end()))) {
            best = std::move(part);
        }
    }
    if (!best.found)
        throw cap_error("rec_exact: no positive-mass rectangle has best-response error <= " +
                        std::to_string(eps) + "; the bound is undefined for this instance");
    return make_certificate(f, mu, best.rows);
}

RectangleCertificate rec_greedy(const FunctionTable& f, const JointDistribution& mu,
                                double eps) {
    check_pair(f, mu, "rec_greedy");
    if (!(eps >= 0.0 && eps < 1.0))
        throw validation_error("rec_greedy: eps must be in [0,1)");

    std::vector<double> row_mass(f.x_size);
    for (int x = 0; x < f.x_size; ++x) row_mass[x] = mu.row_mass(x);
    std::vector<int> order;
    for (int x = 0; x < f.x_size; ++x)
        if (row_mass[x] > 0.0) order.push_back(x);
    if (order.empty())
        throw validation_error("rec_greedy: distribution has no positive-mass row");
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (row_mass[a] != row_mass[b]) return row_mass[a] > row_mass[b];
        return a < b;
    });

    SearchBest best;
    const int seeds = std::min<std::size_t>(5, order.size());
    for (int si = 0; si < seeds; ++si) {
        std::vector<char> in(f.x_size, 0);
        Tallies t(f.y_size, f.z_size);
        std::vector<double> col_best(f.y_size, 0.0); // per-column best score
        auto add_row = [&](int x) {
            t.toggle(f, mu, x, 1.0);
            for (int y = 0; y < f.y_size; ++y) {
                double b = 0.0;
                const double* c = t.concrete.data() + static_cast<std::size_t>(y) * f.z_size;
                for (int z = 0; z < f.z_size; ++z) b = std::max(b, c[z]);
                col_best[y] = b + t.star[y];
            }
            in[x] = 1;
        };
        add_row(order[si]);

        while (true) {
            // err(S + r) in O(|Y|): adding r changes one output bucket per column.
            int pick = -1;
            double pick_score = 0.0, pick_gain = 0.0;
            for (int r : order) {
                if (in[r]) continue;
                double best_total = 0.0;
                for (int y = 0; y < f.y_size; ++y) {
                    const double w = mu.at(r, y);
                    const int v = f.at(r, y);
                    double b = col_best[y];
                    if (v == FunctionTable::kStar) {
                        b += w;
                    } else {
                        const double cand =
                            t.concrete[static_cast<std::size_t>(y) * f.z_size + v] + w + t.star[y];
                        b = std::max(b, cand);
                    }
                    best_total += b;
                }
                const double err = 1.0 - best_total / (t.mass + row_mass[r]);
                if (err > eps + 1e-12) continue;
                const double score = err / row_mass[r];
                if (pick < 0 || score < pick_score ||
                    (score == pick_score && row_mass[r] > pick_gain)) {
                    pick = r;
                    pick_score = score;
                    pick_gain = row_mass[r];
                }
            }
            if (pick < 0) break;
            add_row(pick);
        }

        std::vector<int> rows;
        for (int x = 0; x < f.x_size; ++x)
            if (in[x]) rows.push_back(x);
        Tallies ver(f.y_size, f.z_size);
        for (int x : rows) ver.toggle(f, mu, x, 1.0);
        const double err = ver.error();
        if (err > eps + 1e-12) continue; // drift guard; seed singleton always feasible
        if (!best.found || ver.mass > best.mass ||
            (ver.mass == best.mass &&
             std::lexicographical_compare(rows.begin(), rows.end(),
                                          best.rows.begin(), best.rows.end()))) {
            best.found = true;
            best.mass = ver.mass;
            best.error = err;
            best.rows = std::move(rows);
        }
    }
    if (!best.found) {
        // Fall back to the heaviest singleton, which always has error 0.
        best.found = true;
        best.rows = {order[0]};
    }
    return make_certificate(f, mu, best.rows);
}

std::string RectangleCertificate::to_json() const {
    json j{{"schema_version", 1}, {"S", rows}, {"g", response},
           {"error", error}, {"mass", mass}, {"value_bits", value_bits}};
    return j.dump();
}

RectangleCertificate RectangleCertificate::from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw validation_error("certificate: not valid JSON");
    RectangleCertificate cert;
    try {
        cert.rows = j.at("S").get<std::vector<int>>();
        cert.response = j.at("g").get<std::vector<int>>();
        cert.error = j.at("error").get<double>();
        cert.mass = j.at("mass").get<double>();
        cert.value_bits = j.at("value_bits").get<double>();
    } catch (const json::exception& e) {
        throw validation_error(std::string("certificate: ") + e.what());
    }
    return cert;
}

} // namespace oneway
