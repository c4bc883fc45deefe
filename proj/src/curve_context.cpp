#include "detail/curve_context.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "detail/numerics.hpp"
#include "rmcurve/errors.hpp"

namespace rmcurve::detail {

namespace {

constexpr double kNewtonRelTol = 1e-13;
constexpr int kStepCap = 1 << 12;

int side_sign(Complex target, Side side) {
    if (target.imag() > 0.0) return +1;
    if (target.imag() < 0.0) return -1;
    return side == Side::Below ? -1 : +1;
}

} // namespace

bool newton_fiber(const CurveSpec& spec, Complex x, Complex z0, Complex& out) {
    Complex z = z0;
    const int k = spec.k();
    for (int it = 0; it < 60; ++it) {
        Complex g = x - z;
        Complex gp(-1.0, 0.0);
        double scale = std::abs(x) + std::abs(z);
        for (int j = 0; j < k; ++j) {
            Complex d = z - spec.a[j];
            if (d == Complex(0.0)) return false;
            Complex t = frac_value(spec.eps[j]) / d;
            g -= t;
            gp += t / d;
            scale += std::abs(t);
        }
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) return false;
        if (std::abs(g) < kNewtonRelTol * (1.0 + scale)) {
            out = z;
            return true;
        }
        if (gp == Complex(0.0)) return false;
        Complex dz = g / gp;
        z -= dz;
        if (std::abs(dz) < 1e-16 * (1.0 + std::abs(z))) {
            out = z;
            return true;
        }
    }
    return false;
}

CurveContext::CurveContext(CurveSpec s) : spec(curve::validate_spec(s.a, s.eps)) {
    bps = curve::branch_points(spec);

    const int l = bps.l();
    span_x = std::max(bps.x_real.back() - bps.x_real.front(), 1.0);
    x_far = bps.x_real.back() + 10.0 * std::max(spec.spread(), 1.0);

    double max_im_w = 0.0;
    for (const auto& [w, wc] : bps.x_pairs) max_im_w = std::max(max_im_w, std::abs(w.imag()));
    corridor_h = std::max(0.75 * span_x, 2.5 * max_im_w);

    // x-independent fiber polynomial pieces (needed by density/mass below)
    std::vector<Complex> aC(spec.a.begin(), spec.a.end());
    poly_p_ = poly_from_roots(aC);
    poly_s_.assign(std::max(spec.k(), 1), Complex(0.0));
    for (int j = 0; j < spec.k(); ++j) {
        std::vector<Complex> roots;
        for (int i = 0; i < spec.k(); ++i)
            if (i != j) roots.push_back(aC[i]);
        auto qj = poly_from_roots(roots);
        for (size_t t = 0; t < qj.size(); ++t) poly_s_[t] += frac_value(spec.eps[j]) * qj[t];
    }

    cuts.assign(l, CutInfo{});
    for (int i = 0; i < l; ++i) {
        cuts[i].lo = bps.x_real[2 * i];
        cuts[i].hi = bps.x_real[2 * i + 1];
        cuts[i].p_lo = bps.y_real[2 * i];
        cuts[i].p_hi = bps.y_real[2 * i + 1];
        cuts[i].mass = mass_quadrature(cuts[i].lo, cuts[i].hi);
    }

    // Deal the source eigenvalues to the cuts. Each cut carries the mass of
    // the fractions whose sheets attach to it, and attached runs are
    // consecutive, so the cut masses determine the block sizes.
    int next = 0;
    for (int i = 0; i < l; ++i) {
        double acc = 0.0;
        while (next < spec.k()) {
            cuts[i].flat.push_back(next);
            acc += frac_value(spec.eps[next]);
            ++next;
            if (std::abs(acc - cuts[i].mass) < 1e-6) break;
        }
        if (std::abs(acc - cuts[i].mass) >= 1e-6)
            throw NumericsError("cut masses incompatible with any consecutive "
                                "assignment of filling fractions");
        cuts[i].b = static_cast<int>(cuts[i].flat.size()) - 1;
    }
    if (next != spec.k())
        throw NumericsError("sheet mapping does not exhaust the source eigenvalues");

}

double CurveContext::mass_quadrature(double lo, double hi) const {
    static std::vector<double> nodes, weights;
    static std::once_flag once;
    std::call_once(once, [] { gauss_legendre(64, nodes, weights); });
    constexpr double pi = 3.14159265358979323846;
    // Composite 64-node panels over the sin^2 substitution variable,
    // doubled until converged: interior structure (an imaginary cut passing
    // close to the axis) can spoil single-panel spectral accuracy.
    auto composite = [&](int panels) {
        double acc = 0.0;
        for (int p = 0; p < panels; ++p) {
            double t0 = 0.5 * pi * p / panels;
            double t1 = 0.5 * pi * (p + 1) / panels;
            for (size_t j = 0; j < nodes.size(); ++j) {
                double theta = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * nodes[j];
                double x = lo + (hi - lo) * std::pow(std::sin(theta), 2);
                double jac = (hi - lo) * std::sin(2.0 * theta) * 0.5 * (t1 - t0);
                acc += weights[j] * density_at(x) * jac;
            }
        }
        return acc;
    };
    double prev = composite(1);
    for (int panels = 2; panels <= 64; panels *= 2) {
        double cur = composite(panels);
        if (std::abs(cur - prev) < 1e-11) return cur;
        prev = cur;
    }
    return prev;
}

std::vector<SheetId> CurveContext::sheets() const {
    std::vector<SheetId> out{SheetId{0, 0}};
    for (int i = 0; i < static_cast<int>(cuts.size()); ++i)
        for (int m = 0; m <= cuts[i].b; ++m) out.push_back(SheetId{i + 1, m});
    return out;
}

bool CurveContext::sheet_exists(SheetId s) const {
    if (s.principal()) return s.sub == 0;
    if (s.cut < 1 || s.cut > static_cast<int>(cuts.size())) return false;
    return s.sub >= 0 && s.sub <= cuts[s.cut - 1].b;
}

int CurveContext::flat_of(SheetId s) const {
    if (!sheet_exists(s) || s.principal())
        throw ValidationError("unknown or principal sheet label");
    return cuts[s.cut - 1].flat[s.sub];
}

int CurveContext::matrix_index(SheetId s) const {
    if (!sheet_exists(s)) throw ValidationError("unknown sheet label");
    return s.principal() ? 0 : 1 + flat_of(s);
}

SheetId CurveContext::sheet_of_matrix_index(int idx) const {
    if (idx == 0) return SheetId{0, 0};
    int flat = idx - 1;
    for (int i = 0; i < static_cast<int>(cuts.size()); ++i)
        for (int m = 0; m <= cuts[i].b; ++m)
            if (cuts[i].flat[m] == flat) return SheetId{i + 1, m};
    throw ValidationError("sheet index out of range");
}

int CurveContext::cut_containing(double x) const {
    for (int i = 0; i < static_cast<int>(cuts.size()); ++i)
        if (x > cuts[i].lo && x < cuts[i].hi) return i + 1;
    return 0;
}

Tracked CurveContext::start_state(SheetId s, bool want_sqrt) const {
    if (!sheet_exists(s)) throw ValidationError("unknown sheet label");
    Tracked st;
    st.x = x_far;
    st.want_sqrt = want_sqrt;
    Complex seed;
    if (s.principal()) {
        seed = Complex(x_far - 1.0 / x_far, 0.0);
    } else {
        int j = flat_of(s);
        seed = Complex(spec.a[j] + frac_value(spec.eps[j]) / x_far, 0.0);
    }
    if (!newton_fiber(spec, st.x, seed, st.z))
        throw NumericsError("homotopy start did not converge at the reference point");
    st.theta.resize(spec.k());
    for (int j = 0; j < spec.k(); ++j) st.theta[j] = std::arg(st.z - spec.a[j]);
    if (want_sqrt) {
        Complex xp = curve::x_prime(spec, st.z);
        if (s.principal()) {
            st.sqrt_xp = std::sqrt(xp);
        } else {
            // x' < 0 in the window; the branch with phi_i(xi_i) -> +1 at the
            // reference point is the negative-imaginary square root.
            Complex r = std::sqrt(xp);
            st.sqrt_xp = (r.imag() <= 0.0) ? r : -r;
        }
    }
    return st;
}

void CurveContext::track_segment(Tracked& st, Complex x_to) const {
    const int k = spec.k();
    int steps = 0;
    while (st.x != x_to) {
        Complex rem = x_to - st.x;
        double rlen = std::abs(rem);
        Complex dir = rem / rlen;

        double sep = std::numeric_limits<double>::infinity();
        for (const Complex& r : bps.y_roots) sep = std::min(sep, std::abs(st.z - r));
        for (double aj : spec.a) sep = std::min(sep, std::abs(st.z - aj));

        Complex xp = curve::x_prime(spec, st.z);
        double h = rlen;
        double hlim = 0.35 * sep * std::abs(xp);
        // Take the exact terminal step once the target is within reach;
        // otherwise the approach to a target near a branch point would
        // contract geometrically and never land.
        if (std::isfinite(hlim) && hlim > 0.0 && hlim < 0.25 * rlen) h = hlim;

        bool accepted = false;
        for (int halve = 0; halve < 64 && !accepted; ++halve) {
            bool terminal = h >= rlen;
            Complex x_next = terminal ? x_to : st.x + dir * h;
            if (x_next == st.x)
                throw NumericsError("homotopy path stalled within step tolerance of a branch point");
            Complex z_next;
            if (newton_fiber(spec, x_next, st.z, z_next) &&
                std::abs(z_next - st.z) <= (terminal ? 0.9 : 0.6) * sep) {
                for (int j = 0; j < k; ++j)
                    st.theta[j] += std::arg((z_next - spec.a[j]) / (st.z - spec.a[j]));
                if (st.want_sqrt) {
                    Complex r = std::sqrt(curve::x_prime(spec, z_next));
                    st.sqrt_xp = (std::abs(r - st.sqrt_xp) <= std::abs(r + st.sqrt_xp)) ? r : -r;
                }
                st.x = x_next;
                st.z = z_next;
                accepted = true;
            } else {
                h *= 0.5;
            }
        }
        if (!accepted)
            throw NumericsError("homotopy path stalled within step tolerance of a branch point");
        if (++steps > kStepCap)
            throw NumericsError("homotopy exceeded the step cap");
    }
}

Tracked CurveContext::track_to(SheetId s, Complex target, Side side, bool want_sqrt) const {
    Tracked st = start_state(s, want_sqrt);
    if (target == Complex(x_far, 0.0)) return st;
    if (target.imag() == 0.0 && target.real() > bps.x_real.back() + 1e-12 * span_x) {
        track_segment(st, target);
        return st;
    }
    double sgn = side_sign(target, side);
    Complex lift(0.0, sgn * corridor_h);
    track_segment(st, Complex(x_far, 0.0) + lift);
    track_segment(st, Complex(target.real(), 0.0) + lift);
    track_segment(st, target);
    return st;
}

Complex CurveContext::lambda_raw(const Tracked& st) const {
    Complex z = st.z;
    Complex v = curve::x_of_z(spec, z) * z - 0.5 * z * z;
    for (int j = 0; j < spec.k(); ++j) {
        double e = frac_value(spec.eps[j]);
        v -= e * Complex(std::log(std::abs(z - spec.a[j])), st.theta[j]);
    }
    return v;
}

Complex CurveContext::lambda_raw_at_ypoint(SheetId s, Complex x_near, Side side,
                                           Complex y_exact) const {
    Tracked st = track_to(s, x_near, side);
    for (int j = 0; j < spec.k(); ++j)
        st.theta[j] += std::arg((y_exact - spec.a[j]) / (st.z - spec.a[j]));
    st.z = y_exact;
    st.x = curve::x_of_z(spec, y_exact);
    return lambda_raw(st);
}

void CurveContext::resolve_lambda_constants() const {
    // lambda_0(z_{2l}) = 0 anchors the principal sheet; every sub-sheet
    // constant then follows from the boundary identity
    // lambda_{i,m,-}(x) = lambda_{0,+}(x) on its own window of the cut,
    // which is how the anchoring chain manifests on the real axis.
    lambda_c_.assign(n_sheets(), Complex(0.0));
    const double delta = 1e-7 * span_x;
    const SheetId principal{0, 0};

    const CutInfo& last = cuts.back();
    Complex c0 = -lambda_raw_at_ypoint(principal, Complex(last.hi + delta, 0.0), Side::Above,
                                       Complex(last.p_hi, 0.0));
    lambda_c_[0] = c0;

    const auto& gamma = gamma_crossings();
    for (int i = 0; i < static_cast<int>(cuts.size()); ++i) {
        const CutInfo& ci = cuts[i];
        for (int m = 0; m <= ci.b; ++m) {
            double wlo = (m == 0) ? ci.lo : gamma[i][m - 1];
            double whi = (m == ci.b) ? ci.hi : gamma[i][m];
            Complex xm(0.5 * (wlo + whi), 0.0);
            Complex v0 = lambda_raw(track_to(principal, xm, Side::Above)) + c0;
            Complex raw = lambda_raw(track_to(SheetId{i + 1, m}, xm, Side::Below));
            lambda_c_[matrix_index(SheetId{i + 1, m})] = v0 - raw;
        }
    }
}

const std::vector<Complex>& CurveContext::lambda_constants() const {
    std::call_once(lambda_once_, [this] { resolve_lambda_constants(); });
    return lambda_c_;
}

Complex CurveContext::lambda_value(SheetId s, Complex target, Side side) const {
    const auto& c = lambda_constants();
    Tracked st = track_to(s, target, side);
    return lambda_raw(st) + c[matrix_index(s)];
}

int CurveContext::local_subsheet(int cut_i, double x) const {
    const CutInfo& ci = cuts[cut_i - 1];
    // Evaluation columns lining up exactly with a complex branch point make
    // the tracking path run through it; retry a hair off.
    for (int attempt = 0;; ++attempt) {
        try {
            Complex zeta = track_to(SheetId{0, 0}, Complex(x, 0.0), Side::Above).z;
            double scale = 1.0 + std::abs(zeta);
            double best = std::numeric_limits<double>::infinity(), second = best;
            int best_m = -1;
            for (int m = 0; m <= ci.b; ++m) {
                Complex zm = track_to(SheetId{cut_i, m}, Complex(x, 0.0), Side::Above).z;
                double d = std::abs(zm - std::conj(zeta));
                if (d < best) {
                    second = best;
                    best = d;
                    best_m = m;
                } else {
                    second = std::min(second, d);
                }
            }
            if (best > 1e-4 * scale || (ci.b >= 1 && second < 8.0 * best))
                throw NumericsError("ambiguous sheet pairing on the cut");
            return best_m;
        } catch (const NumericsError&) {
            if (attempt >= 2) throw;
            x += (attempt == 0 ? 1.0 : -2.0) * 3e-13 * span_x;
        }
    }
}

void CurveContext::resolve_gamma() const {
    // r_i^(m) is the real point where the boundary pairing with xi_0 hands
    // over from sub-sheet m-1 to m, equivalently where Re lambda_i^(m) and
    // Re lambda_i^(m-1) swap across the imaginary cut.
    gamma_.assign(cuts.size(), {});
    for (int i = 0; i < static_cast<int>(cuts.size()); ++i) {
        const CutInfo& ci = cuts[i];
        if (ci.b == 0) continue;
        const int n = 81;
        std::vector<double> xs(n);
        std::vector<int> loc(n);
        for (int j = 0; j < n; ++j) {
            xs[j] = ci.lo + (ci.hi - ci.lo) * (j + 1 + 0.382) / (n + 2);
            loc[j] = local_subsheet(i + 1, xs[j]);
        }
        for (int j = 1; j < n; ++j)
            if (loc[j] < loc[j - 1])
                throw NumericsError("cut windows out of order (outside generic assumption)");
        if (loc.front() != 0 || loc.back() != ci.b)
            throw NumericsError("imaginary-cut crossing falls outside its cut "
                                "(outside the generic assumption)");
        for (int m = 1; m <= ci.b; ++m) {
            int j = 0;
            while (j < n && loc[j] < m) ++j;
            if (j == 0 || j == n)
                throw NumericsError("no Re-lambda crossing found inside the cut");
            double a = xs[j - 1], b = xs[j];
            while ((b - a) > 1e-12 * span_x) {
                double mid = a + 0.53 * (b - a);
                if (local_subsheet(i + 1, mid) < m)
                    a = mid;
                else
                    b = mid;
            }
            gamma_[i].push_back(0.5 * (a + b));
        }
        for (size_t m = 1; m < gamma_[i].size(); ++m)
            if (!(gamma_[i][m] - gamma_[i][m - 1] > 1e-9 * span_x))
                throw NumericsError("sub-sheet window vanishes on the cut "
                                    "(outside the generic window assumption)");
    }
}

const std::vector<std::vector<double>>& CurveContext::gamma_crossings() const {
    std::call_once(gamma_once_, [this] { resolve_gamma(); });
    return gamma_;
}

std::vector<Complex> CurveContext::fiber_roots(Complex x) const {
    // (x - y) P(y) - S(y), coefficients in increasing degree
    const int k = spec.k();
    std::vector<Complex> c(k + 2, Complex(0.0));
    for (int t = 0; t <= k; ++t) c[t] += x * poly_p_[t];
    for (int t = 0; t <= k; ++t) c[t + 1] -= poly_p_[t];
    for (int t = 0; t < k; ++t) c[t] -= poly_s_[t];
    auto roots = companion_roots(c);
    for (auto& r : roots) {
        Complex polished;
        if (newton_fiber(spec, x, r, polished)) r = polished;
    }
    return roots;
}

double CurveContext::density_at(double x) const {
    if (cut_containing(x) == 0) return 0.0;
    auto roots = fiber_roots(Complex(x, 0.0));
    double best = 0.0;
    for (const auto& r : roots) best = std::max(best, std::abs(r.imag()));
    constexpr double pi = 3.14159265358979323846;
    if (best < 1e-13 * (1.0 + std::abs(x))) return 0.0;
    return best / pi;
}

std::shared_ptr<const CurveContext> get_context(const CurveSpec& spec) {
    static std::mutex mx;
    static std::map<std::string, std::shared_ptr<const CurveContext>> cache;

    std::string key;
    key.reserve(spec.a.size() * 24);
    auto push = [&key](const void* p, size_t n) {
        key.append(static_cast<const char*>(p), n);
    };
    for (double v : spec.a) push(&v, sizeof v);
    for (const auto& f : spec.eps) {
        auto n = f.numerator();
        auto d = f.denominator();
        push(&n, sizeof n);
        push(&d, sizeof d);
    }

    {
        std::lock_guard<std::mutex> lk(mx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto ctx = std::make_shared<const CurveContext>(spec);
    std::lock_guard<std::mutex> lk(mx);
    if (cache.size() > 256) cache.clear();
    auto [it, inserted] = cache.emplace(std::move(key), std::move(ctx));
    return it->second;
}

} // namespace rmcurve::detail
