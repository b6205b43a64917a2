#include "spincant/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "spincant/errors.hpp"

// Eighth-order Dormand-Prince pair with embedded 5th/3rd-order error
// estimators, after Hairer-Norsett-Wanner's DOP853.  Twelve stages; no dense
// output (sample times are hit by clamping the final step of each segment).

namespace spincant {

namespace {

constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;
constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double kUround = 2.3e-16;
constexpr double kSafe = 0.9;
constexpr double kFac1 = 1.0 / 3.0;  // max step shrink factor
constexpr double kFac2 = 6.0;        // max step growth factor

}  // namespace

Dop853::Dop853(std::size_t n)
    : n_(n), w1_(n), k1_(n), k2_(n), k3_(n), k4_(n), k5_(n), k6_(n), k7_(n), k8_(n), k9_(n),
      k10_(n) {}

// Runs stages 2..12 from state y at time t; expects k1_ = f(t, y).  On return
// k5_ holds the 8th-order solution at t+h and k4_ the weighted stage sum.
void Dop853::stages(const OdeRhs& f, const double* y, double t, double h) {
    const std::size_t n = n_;
    double* w = w1_.data();
    for (std::size_t i = 0; i < n; i++) w[i] = y[i] + h * a21 * k1_[i];
    f(t + c2 * h, w, k2_.data());
    for (std::size_t i = 0; i < n; i++) w[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    f(t + c3 * h, w, k3_.data());
    for (std::size_t i = 0; i < n; i++) w[i] = y[i] + h * (a41 * k1_[i] + a43 * k3_[i]);
    f(t + c4 * h, w, k4_.data());
    for (std::size_t i = 0; i < n; i++)
        w[i] = y[i] + h * (a51 * k1_[i] + a53 * k3_[i] + a54 * k4_[i]);
    f(t + c5 * h, w, k5_.data());
    for (std::size_t i = 0; i < n; i++)
        w[i] = y[i] + h * (a61 * k1_[i] + a64 * k4_[i] + a65 * k5_[i]);
    f(t + c6 * h, w, k6_.data());
    for (std::size_t i = 0; i < n; i++)
        w[i] = y[i] + h * (a71 * k1_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
    f(t + c7 * h, w, k7_.data());
    for (std::size_t i = 0; i < n; i++)
        w[i] = y[i] + h * (a81 * k1_[i] + a84 * k4_[i] + a85 * k5_[i] + a86 * k6_[i] +
                           a87 * k7_[i]);
    f(t + c8 * h, w, k8_.data());
    for (std::size_t i = 0; i < n; i++)
        w[i] = y[i] + h * (a91 * k1_[i] + a94 * k4_[i] + a95 * k5_[i] + a96 * k6_[i] +
                           a97 * k7_[i] + a98 * k8_[i]);
    f(t + c9 * h, w, k9_.data());
    for (std::size_t i = 0; i < n; i++)
        w[i] = y[i] + h * (a101 * k1_[i] + a104 * k4_[i] + a105 * k5_[i] + a106 * k6_[i] +
                           a107 * k7_[i] + a108 * k8_[i] + a109 * k9_[i]);
    f(t + c10 * h, w, k10_.data());
    for (std::size_t i = 0; i < n; i++)
        w[i] = y[i] + h * (a111 * k1_[i] + a114 * k4_[i] + a115 * k5_[i] + a116 * k6_[i] +
                           a117 * k7_[i] + a118 * k8_[i] + a119 * k9_[i] + a1110 * k10_[i]);
    f(t + c11 * h, w, k2_.data());
    for (std::size_t i = 0; i < n; i++)
        w[i] = y[i] + h * (a121 * k1_[i] + a124 * k4_[i] + a125 * k5_[i] + a126 * k6_[i] +
                           a127 * k7_[i] + a128 * k8_[i] + a129 * k9_[i] + a1210 * k10_[i] +
                           a1211 * k2_[i]);
    f(t + h, w, k3_.data());
    for (std::size_t i = 0; i < n; i++) {
        k4_[i] = b1 * k1_[i] + b6 * k6_[i] + b7 * k7_[i] + b8 * k8_[i] + b9 * k9_[i] +
                 b10 * k10_[i] + b11 * k2_[i] + b12 * k3_[i];
        k5_[i] = y[i] + h * k4_[i];
    }
}

// Combined 5th/3rd-order error estimate, scaled per component by
// atol + rtol*max(|y_old|, |y_new|); to be multiplied by |h| by the caller.
double Dop853::error_norm(const double* y, double rtol, double atol) const {
    double err = 0, err2 = 0;
    for (std::size_t i = 0; i < n_; i++) {
        const double sk = 1.0 / (atol + rtol * std::max(std::abs(y[i]), std::abs(k5_[i])));
        double sq = (k4_[i] - bhh1 * k1_[i] - bhh2 * k9_[i] - bhh3 * k3_[i]) * sk;
        err2 += sq * sq;
        sq = (er1 * k1_[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] + er9 * k9_[i] +
              er10 * k10_[i] + er11 * k2_[i] + er12 * k3_[i]) * sk;
        err += sq * sq;
    }
    const double deno = err + 0.01 * err2;
    return err * std::sqrt(1.0 / (deno <= 0.0 ? double(n_) : deno * double(n_)));
}

// Standard starting-step heuristic: balance the first derivative against a
// finite-difference estimate of the second.  Expects k1_ = f(t, y).
double Dop853::initial_step(const OdeRhs& f, const double* y, double t, double hmax, double rtol,
                            double atol) {
    double dnf = 0, dny = 0;
    for (std::size_t i = 0; i < n_; i++) {
        const double sk = atol + rtol * std::abs(y[i]);
        double sq = k1_[i] / sk;
        dnf += sq * sq;
        sq = y[i] / sk;
        dny += sq * sq;
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);
    for (std::size_t i = 0; i < n_; i++) w1_[i] = y[i] + h * k1_[i];
    f(t + h, w1_.data(), k2_.data());
    double der2 = 0;
    for (std::size_t i = 0; i < n_; i++) {
        const double sq = (k2_[i] - k1_[i]) / (atol + rtol * std::abs(y[i]));
        der2 += sq * sq;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.125);
    return std::min({100.0 * h, h1, hmax});
}

OdeStats Dop853::integrate(const OdeRhs& f, std::vector<double>& y, double t0, double t1,
                           const OdeControls& c) {
    if (y.size() != n_) throw ConfigError("Dop853: state size mismatch");
    if (!(t1 > t0)) throw ConfigError("Dop853: require t1 > t0");
    OdeStats st;
    const double hmax = c.h_max > 0 ? c.h_max : t1 - t0;
    double t = t0;
    bool reject = false, last = false;

    f(t, y.data(), k1_.data());
    st.n_rhs++;
    double h = c.h_init > 0 ? std::min(c.h_init, hmax) : initial_step(f, y.data(), t, hmax, c.rtol, c.atol);
    if (c.h_init <= 0) st.n_rhs++;

    while (true) {
        if (st.n_steps > c.max_steps)
            throw HealthError("integrator exceeded max_steps at t=" + std::to_string(t));
        if (0.1 * h <= std::abs(t) * kUround)
            throw HealthError("integrator step size underflow (stiffness) at t=" + std::to_string(t));
        if (t + 1.01 * h - t1 > 0.0) {
            h = t1 - t;
            last = true;
        }

        st.n_steps++;
        stages(f, y.data(), t, h);
        st.n_rhs += 11;
        const double err = h * error_norm(y.data(), c.rtol, c.atol);

        const double fac11 = std::pow(err, 0.125);
        const double fac = std::max(1.0 / kFac2, std::min(1.0 / kFac1, fac11 / kSafe));
        double hnew = h / fac;

        if (err <= 1.0) {
            st.n_accepted++;
            f(t + h, k5_.data(), k4_.data());
            st.n_rhs++;
            std::memcpy(k1_.data(), k4_.data(), n_ * sizeof(double));
            std::memcpy(y.data(), k5_.data(), n_ * sizeof(double));
            t += h;
            st.h_last = h;
            if (last) return st;
            if (hnew > hmax) hnew = hmax;
            if (reject) hnew = std::min(hnew, h);
            reject = false;
        } else {
            hnew = h / std::min(1.0 / kFac1, fac11 / kSafe);
            reject = true;
            last = false;
            if (st.n_accepted >= 1) st.n_rejected++;
        }
        h = hnew;
    }
}

}  // namespace spincant
