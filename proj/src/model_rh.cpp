#include "rmcurve/model_rh.hpp"

#include <cmath>

#include "detail/curve_context.hpp"
#include "rmcurve/errors.hpp"

namespace rmcurve::rh {

namespace {

// phi entries from a tracked fiber root carrying the continued sqrt(x'):
// with R = x'(z) prod_j (z - a_j)^2 the square root reduces to
// sqrt(x'(z)) * prod (z - a_j), so phi_0 = 1/w and phi_i = c_i/(w (z - a_i)).
void fill_column(const CurveSpec& spec, const detail::Tracked& st, int col,
                 Eigen::MatrixXcd& m) {
    Complex w = st.sqrt_xp;
    m(0, col) = 1.0 / w;
    for (int i = 0; i < spec.k(); ++i) {
        Complex ci(0.0, -std::sqrt(frac_value(spec.eps[i])));
        m(i + 1, col) = ci / (w * (st.z - spec.a[i]));
    }
}

} // namespace

ModelRHMatrix model_rh_matrix(const CurveSpec& spec, Complex x, Side side) {
    auto ctx = detail::get_context(spec);
    if (!ctx->bps.x_pairs.empty())
        throw UnsupportedError("COMPLEX_BRANCH_POINTS",
                               "model RH solution implemented for all-real branch points (l = k)");
    if (x.imag() == 0.0 && side == Side::Auto && ctx->cut_containing(x.real()) != 0)
        throw ValidationError("model RH matrix on a cut requires an explicit side");

    const int k = spec.k();
    ModelRHMatrix out;
    out.at = x;
    out.spec = spec;
    out.p_images = ctx->bps.y_real;
    out.entries.resize(k + 1, k + 1);
    for (const auto& s : ctx->sheets()) {
        detail::Tracked st = ctx->track_to(s, x, side, /*want_sqrt=*/true);
        fill_column(spec, st, ctx->matrix_index(s), out.entries);
    }
    return out;
}

RHVerifyReport verify_model_rh(const CurveSpec& spec, int points_per_cut) {
    if (points_per_cut < 1) throw ValidationError("points_per_cut must be positive");
    auto ctx = detail::get_context(spec);
    if (!ctx->bps.x_pairs.empty())
        throw UnsupportedError("COMPLEX_BRANCH_POINTS",
                               "model RH verification requires the l = k configuration");

    const int k = spec.k();
    RHVerifyReport report;
    report.points_per_cut = points_per_cut;

    for (int i = 0; i < static_cast<int>(ctx->cuts.size()); ++i) {
        const auto& ci = ctx->cuts[i];
        Eigen::MatrixXcd js = Eigen::MatrixXcd::Identity(k + 1, k + 1);
        int idx = i + 1; // flat sheet index of (i+1, 0) when l = k
        js(0, 0) = 0.0;
        js(idx, idx) = 0.0;
        js(0, idx) = 1.0;
        js(idx, 0) = -1.0;

        double worst = 0.0;
        for (int j = 1; j <= points_per_cut; ++j) {
            double x = ci.lo + (ci.hi - ci.lo) * j / (points_per_cut + 1.0);
            auto mp = model_rh_matrix(spec, Complex(x, 0.0), Side::Above);
            auto mm = model_rh_matrix(spec, Complex(x, 0.0), Side::Below);
            double res = (mp.entries - mm.entries * js).cwiseAbs().maxCoeff();
            worst = std::max(worst, res);
        }
        report.per_cut_residual.push_back(worst);
        report.max_jump_residual = std::max(report.max_jump_residual, worst);
    }

    // decay of ||M - I|| along a real ray to the right of the support
    std::vector<double> lx, ly;
    double x0 = ctx->bps.x_real.back() + 10.0 * ctx->span_x;
    for (int j = 0; j < 5; ++j) {
        double x = x0 * std::pow(3.0, j);
        auto m = model_rh_matrix(spec, Complex(x, 0.0));
        double dev = (m.entries - Eigen::MatrixXcd::Identity(k + 1, k + 1)).cwiseAbs().maxCoeff();
        lx.push_back(std::log(x));
        ly.push_back(std::log(dev));
    }
    double mx = 0, my = 0;
    for (size_t j = 0; j < lx.size(); ++j) {
        mx += lx[j];
        my += ly[j];
    }
    mx /= lx.size();
    my /= lx.size();
    double sxx = 0, sxy = 0;
    for (size_t j = 0; j < lx.size(); ++j) {
        sxx += (lx[j] - mx) * (lx[j] - mx);
        sxy += (lx[j] - mx) * (ly[j] - my);
    }
    report.decay_slope = sxy / sxx;
    return report;
}

} // namespace rmcurve::rh
