#include "dischull/discs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <stdexcept>

#include "dischull/domain.hpp"

namespace dischull {

AnalyticDisc::AnalyticDisc(std::vector<C2> c, double rho) : coeffs(std::move(c)), radius(rho) {
    if (radius <= 1.0) throw std::invalid_argument("AnalyticDisc: radius must exceed 1");
    if (coeffs.empty()) coeffs.push_back(C2{});
    tail_const = 0.0;
    double rk = 1.0;
    for (const auto& a : coeffs) {
        tail_const = std::max(tail_const, a.norm() * rk);
        rk *= radius;
    }
}

C2 AnalyticDisc::eval(cplx z) const {
    C2 acc;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
}

C2 AnalyticDisc::deriv(cplx z) const {
    C2 acc;
    for (std::size_t k = coeffs.size(); k-- > 1;)
        acc = acc * z + coeffs[k] * cplx(double(k));
    return acc;
}

std::vector<C2> AnalyticDisc::boundary_samples(int n) const {
    std::vector<C2> out(n);
    for (int j = 0; j < n; ++j) out[j] = eval(std::polar(1.0, 2 * M_PI * j / n));
    return out;
}

double AnalyticDisc::image_diameter(int n) const {
    auto b = boundary_samples(n);
    double d = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) d = std::max(d, (b[i] - b[j]).norm());
    return d;
}

double disc_distance(const AnalyticDisc& a, const AnalyticDisc& b) {
    double m = 0.0;
    std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    for (std::size_t k = 0; k < n; ++k) {
        C2 ca = k < a.coeffs.size() ? a.coeffs[k] : C2{};
        C2 cb = k < b.coeffs.size() ? b.coeffs[k] : C2{};
        m = std::max(m, (ca - cb).norm());
    }
    return m;
}

double disc_c1_distance(const AnalyticDisc& a, const AnalyticDisc& b) {
    double m = disc_distance(a, b);
    std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    for (std::size_t k = 1; k < n; ++k) {
        C2 ca = k < a.coeffs.size() ? a.coeffs[k] : C2{};
        C2 cb = k < b.coeffs.size() ? b.coeffs[k] : C2{};
        m = std::max(m, (ca - cb).norm() * double(k));
    }
    return m;
}

AnalyticDisc recenter(const AnalyticDisc& d, cplx z0, cplx rotation, const Tolerances& tol) {
    const double a = std::abs(z0);
    if (a >= 1.0) throw std::invalid_argument("recenter: |z0| must be < 1");
    if (std::abs(std::abs(rotation) - 1.0) > 1e-12)
        throw std::invalid_argument("recenter: rotation must be unimodular");
    MobiusAut phi{z0, rotation};

    const double rho_eff = 0.5 * (1.0 + d.radius);
    // sampling radius: keep the Mobius image inside |w| <= rho_eff
    double rs = rho_eff;
    if (a > 1e-15) {
        double cap = 0.95 / a;
        if (1.0 - a * rho_eff > 1e-12)
            rs = std::min(rho_eff, (rho_eff - a) / (1.0 - a * rho_eff));
        rs = std::min(rs, cap);
    }
    rs = std::max(rs, 1.0 + 0.25 * (rho_eff - 1.0));  // keep a margin above 1

    int n_fft = 512;
    int degree = std::max(tol.default_degree, d.degree());
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::vector<cplx> s1(n_fft), s2(n_fft);
        for (int j = 0; j < n_fft; ++j) {
            cplx z = std::polar(rs, 2 * M_PI * j / n_fft);
            C2 v = d.eval(phi.apply(z));
            s1[j] = v.w1;
            s2[j] = v.w2;
        }
        auto c1 = fourier_coeffs(std::move(s1));
        auto c2 = fourier_coeffs(std::move(s2));
        std::vector<C2> coeffs(degree + 1);
        double rk = 1.0;
        for (int k = 0; k <= degree && k < n_fft / 2; ++k) {
            coeffs[k] = C2{c1[k] / rk, c2[k] / rk};
            rk *= rs;
        }
        coeffs[0] = d.eval(z0);  // center value is exact by construction
        AnalyticDisc out(std::move(coeffs), rs);
        // verify against direct composition on the unit circle
        double err = 0.0;
        for (int j = 0; j < tol.n_boundary; ++j) {
            cplx z = std::polar(1.0, 2 * M_PI * j / tol.n_boundary);
            err = std::max(err, (out.eval(z) - d.eval(phi.apply(z))).norm());
        }
        if (err < tol.tol_trunc) return out;
        degree *= 2;
        n_fft *= 2;
    }
    throw std::runtime_error("recenter: truncation tolerance unreachable after degree escalation");
}

GDiscReport is_g_disc(const AnalyticDisc& d, const ModelDomain& G, const Tolerances& tol) {
    GDiscReport rep;
    // immersion on a 64x32 polar grid of the closed disc
    double mind = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 32; ++i) {
        double r = double(i) / 31.0;
        for (int j = 0; j < 64; ++j) {
            cplx z = std::polar(r, 2 * M_PI * j / 64);
            mind = std::min(mind, d.deriv(z).norm());
        }
    }
    rep.min_deriv = mind;
    rep.immersed = mind > tol.tol_imm;
    rep.boundary_in_G = true;
    rep.margin = std::numeric_limits<double>::infinity();
    for (const C2& w : d.boundary_samples(tol.n_boundary)) {
        if (!G.contains(w)) rep.boundary_in_G = false;
        rep.margin = std::min(rep.margin, G.margin(w));
    }
    return rep;
}

AnalyticDisc small_embedded_disc(const C2& center, const C2& direction, double r) {
    if (r <= 0.0) throw std::invalid_argument("small_embedded_disc: r must be positive");
    return AnalyticDisc({center, direction * cplx(r)}, 2.0);
}

AnalyticDisc TubeFoliation::leaf(cplx z2) const {
    AnalyticDisc out = base;
    out.coeffs[0] = out.coeffs[0] + direction * z2;
    return out;
}

TubeFoliation::Leaf TubeFoliation::leaf_through(const C2& q) const {
    // Newton on F(z1, z2) = base(z1) + z2 * v - q
    auto attempt = [&](cplx z1, cplx z2) -> Leaf {
        for (int it = 0; it < 50; ++it) {
            C2 r = base.eval(z1) + direction * z2 - q;
            if (r.norm() < 1e-13) return {z1, z2, r.norm()};
            C2 dd = base.deriv(z1);
            cplx det = dd.w1 * direction.w2 - dd.w2 * direction.w1;
            if (std::abs(det) < 1e-14) break;
            cplx dz1 = (r.w1 * direction.w2 - r.w2 * direction.w1) / det;
            cplx dz2 = (dd.w1 * r.w2 - dd.w2 * r.w1) / det;
            z1 -= dz1;
            z2 -= dz2;
            if (std::abs(z1) > base.radius) z1 *= base.radius / std::abs(z1);
        }
        C2 r = base.eval(z1) + direction * z2 - q;
        return {z1, z2, r.norm()};
    };
    Leaf best = attempt(0.0, 0.0);
    if (best.residual < 1e-11) return best;
    for (int i = 0; i < 8 && best.residual >= 1e-11; ++i)
        for (int j = 1; j <= 3; ++j) {
            Leaf l = attempt(std::polar(0.3 * j, 2 * M_PI * i / 8.0), 0.0);
            if (l.residual < best.residual) best = l;
        }
    if (best.residual >= 1e-10)
        throw std::runtime_error("foliate_tube: Newton did not converge for query point");
    return best;
}

TubeFoliation foliate_tube(const AnalyticDisc& d, const C2& v, double delta,
                           const Tolerances& tol) {
    double mint = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 16; ++i) {
        double r = double(i) / 15.0;
        for (int j = 0; j < 64; ++j) {
            C2 dd = d.deriv(std::polar(r, 2 * M_PI * j / 64));
            mint = std::min(mint, std::abs(dd.w1 * v.w2 - dd.w2 * v.w1));
        }
    }
    if (mint <= tol.tol_trans)
        throw std::invalid_argument("foliate_tube: direction not transversal to the disc");
    return TubeFoliation{d, v, delta, mint};
}

AnalyticDisc DiscFamily::at(double t) const {
    validate();
    if (t <= params.front()) return discs.front();
    if (t >= params.back()) return discs.back();
    auto it = std::upper_bound(params.begin(), params.end(), t);
    std::size_t i = std::size_t(it - params.begin()) - 1;
    double w = (t - params[i]) / (params[i + 1] - params[i]);
    const AnalyticDisc &a = discs[i], &b = discs[i + 1];
    std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    std::vector<C2> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        C2 ca = k < a.coeffs.size() ? a.coeffs[k] : C2{};
        C2 cb = k < b.coeffs.size() ? b.coeffs[k] : C2{};
        c[k] = ca * (1.0 - w) + cb * w;
    }
    return AnalyticDisc(std::move(c), std::min(a.radius, b.radius));
}

double DiscFamily::max_step() const {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < discs.size(); ++i)
        m = std::max(m, disc_distance(discs[i], discs[i + 1]));
    return m;
}

std::vector<C2> DiscFamily::centers() const {
    std::vector<C2> out;
    out.reserve(discs.size());
    for (const auto& d : discs) out.push_back(d.center());
    return out;
}

void DiscFamily::validate() const {
    if (params.size() != discs.size() || discs.empty())
        throw std::invalid_argument("DiscFamily: params/discs mismatch or empty");
    if (!std::is_sorted(params.begin(), params.end()))
        throw std::invalid_argument("DiscFamily: params must be sorted");
}

C2 HolomorphizedFamily::coeff_at(int k, double t) const {
    C2 c = k < int(at_one.coeffs.size()) ? at_one.coeffs[k] : C2{};
    if (k <= varying_degree && k < int(t_poly.size())) {
        // basis (t-1) * t^j
        double tj = 1.0;
        for (const C2& p : t_poly[k]) {
            c = c + p * cplx((t - 1.0) * tj);
            tj *= t;
        }
    }
    return c;
}

C2 HolomorphizedFamily::eval(double t, cplx z) const {
    int n = std::max<int>(int(at_one.coeffs.size()), varying_degree + 1);
    C2 acc;
    for (int k = n - 1; k >= 0; --k) acc = acc * z + coeff_at(k, t);
    return acc;
}

AnalyticDisc HolomorphizedFamily::member(double t) const {
    int n = std::max<int>(int(at_one.coeffs.size()), varying_degree + 1);
    std::vector<C2> c(n);
    for (int k = 0; k < n; ++k) c[k] = coeff_at(k, t);
    return AnalyticDisc(std::move(c), at_one.radius);
}

HolomorphizedFamily holomorphize_family(const DiscFamily& F, int N, int t_degree,
                                        double tol) {
    F.validate();
    if (t_degree < 1) throw std::invalid_argument("holomorphize_family: t_degree >= 1");
    HolomorphizedFamily H;
    H.at_one = F.discs.back();
    H.varying_degree = N;
    H.t_poly.assign(N + 1, {});

    const std::size_t m = F.size();
    for (int k = 0; k <= N; ++k) {
        C2 ak1 = k < int(H.at_one.coeffs.size()) ? H.at_one.coeffs[k] : C2{};
        // least squares fit of a_k(t) - a_k(1) in the basis (t-1) t^j
        int nb = std::min<int>(t_degree, int(m));
        Eigen::MatrixXcd A(m, nb);
        Eigen::VectorXcd b1(m), b2(m);
        bool all_zero = true;
        for (std::size_t i = 0; i < m; ++i) {
            double t = F.params[i];
            double tj = 1.0;
            for (int j = 0; j < nb; ++j) {
                A(i, j) = (t - 1.0) * tj;
                tj *= t;
            }
            const auto& cs = F.discs[i].coeffs;
            C2 v = (k < int(cs.size()) ? cs[k] : C2{}) - ak1;
            b1(i) = v.w1;
            b2(i) = v.w2;
            if (v.norm() > 1e-15) all_zero = false;
        }
        if (all_zero) continue;
        auto qr = A.colPivHouseholderQr();
        Eigen::VectorXcd x1 = qr.solve(b1), x2 = qr.solve(b2);
        H.t_poly[k].resize(nb);
        for (int j = 0; j < nb; ++j) H.t_poly[k][j] = C2{x1(j), x2(j)};
    }

    // sup sample error against the input family
    double err = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (int j = 0; j < 32; ++j) {
            cplx z = std::polar(1.0, 2 * M_PI * j / 32);
            err = std::max(err, (H.eval(F.params[i], z) - F.discs[i].eval(z)).norm());
        }
    }
    H.achieved_error = err;
    H.tol_met = err <= tol;
    return H;
}

PerturbResult perturb_to_immersion(const DiscFamily& F, double tol_imm, int attempts,
                                   double bound, std::uint64_t seed) {
    F.validate();
    Tolerances tol;
    tol.tol_imm = tol_imm;
    auto all_immersed = [&](const DiscFamily& fam) {
        for (const auto& d : fam.discs) {
            double mind = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 32; ++i)
                for (int j = 0; j < 64; ++j)
                    mind = std::min(mind,
                                    d.deriv(std::polar(double(i) / 31.0, 2 * M_PI * j / 64)).norm());
            if (mind <= tol_imm) return false;
        }
        return true;
    };
    if (all_immersed(F)) return {F, 0, true, 0.0};

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        double mag = bound * (0.3 + 0.7 * double(attempt) / double(attempts));
        // one shared perturbation on coefficients 1..4, centers untouched
        std::vector<C2> p(5);
        double nrm = 0.0;
        for (int k = 1; k <= 4; ++k) {
            p[k] = C2{cplx(uni(rng), uni(rng)), cplx(uni(rng), uni(rng))} * cplx(mag / 4.0);
            nrm += p[k].norm();
        }
        DiscFamily out = F;
        for (auto& d : out.discs) {
            if (d.coeffs.size() < 5) d.coeffs.resize(5);
            for (int k = 1; k <= 4; ++k) d.coeffs[k] = d.coeffs[k] + p[k];
        }
        if (all_immersed(out)) return {out, attempt, true, nrm};
    }
    return {F, attempts, false, 0.0};
}

}  // namespace dischull
