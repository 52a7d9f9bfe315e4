#include "oisac/modem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oisac/error.hpp"
#include "oisac/rng.hpp"

namespace oisac {

namespace {
const double kQamNorm = 1.0 / std::sqrt(10.0);

// Gray pair -> level: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
double gray_level(std::uint8_t b0, std::uint8_t b1) {
    if (b0 == 0) return b1 == 0 ? -3.0 : -1.0;
    return b1 == 1 ? 1.0 : 3.0;
}

void level_bits(double v, std::uint8_t& b0, std::uint8_t& b1) {
    const double s = v / kQamNorm;
    if (s < -2.0) {
        b0 = 0; b1 = 0;
    } else if (s < 0.0) {
        b0 = 0; b1 = 1;
    } else if (s < 2.0) {
        b0 = 1; b1 = 1;
    } else {
        b0 = 1; b1 = 0;
    }
}
}  // namespace

int bits_per_symbol(Constellation c) { return c == Constellation::bpsk ? 1 : 4; }

void OfdmConfig::validate() const {
    if (subcarriers < 4 || (subcarriers & (subcarriers - 1)) != 0)
        throw DomainError("ofdm: subcarriers must be a power of two >= 4");
    if (!(bias_sigma >= 0.0)) throw DomainError("ofdm: bias_sigma must be >= 0");
}

CMatrix hermitian_extend(const CMatrix& u, int n) {
    if (n < 4 || n % 2 != 0) throw ShapeError("hermitian_extend: N must be even and >= 4");
    const int p = n / 2 - 1;
    if (u.rows() != p) throw ShapeError("hermitian_extend: payload must have N/2-1 rows");
    CMatrix x = CMatrix::Zero(n, u.cols());
    for (int i = 0; i < p; ++i) {
        x.row(i + 1) = u.row(i);
        x.row(n - 1 - i) = u.row(i).conjugate();
    }
    return x;
}

RMatrix modulate(const Dft& dft, const CMatrix& x, double* max_imag) {
    const CMatrix v = dft.inverse(x);
    if (max_imag) *max_imag = v.size() ? v.imag().cwiseAbs().maxCoeff() : 0.0;
    return v.real();
}

CMatrix demodulate(const Dft& dft, const RMatrix& v) { return dft.forward(v.cast<std::complex<double>>()); }

BiasedSignal apply_dc_bias(const RMatrix& v, double bias_sigma, bool clipping) {
    BiasedSignal out;
    const double n = static_cast<double>(v.size());
    double sd = 0.0;
    if (n > 0) {
        const double mean = v.mean();
        sd = std::sqrt((v.array() - mean).square().sum() / n);
    }
    out.bias = bias_sigma * sd;
    out.samples = v.array() + out.bias;
    if (clipping) {
        for (Eigen::Index i = 0; i < out.samples.size(); ++i) {
            if (out.samples.data()[i] < 0.0) {
                out.samples.data()[i] = 0.0;
                ++out.clipped;
            }
        }
    }
    return out;
}

CMatrix subcarrier_response(const ChannelState& ch, int n, double sample_rate) {
    const Eigen::Index kappa = ch.gains.cols();
    CMatrix h = CMatrix::Zero(n, kappa);
    for (int i = 0; i < n; ++i) {
        const double f = i <= n / 2 ? i : i - n;
        for (Eigen::Index k = 0; k < kappa; ++k) {
            std::complex<double> sum = 0.0;
            for (Eigen::Index m = 0; m < ch.gains.rows(); ++m) {
                const double phase = -2.0 * kPi * f * ch.delays(m, k) * sample_rate / n;
                sum += ch.gains(m, k) * std::polar(1.0, phase);
            }
            h(i, k) = sum;
        }
    }
    return h;
}

std::vector<CMatrix> channel_and_receive(const Dft& dft, const BiasedSignal& s, const CMatrix& h,
                                         double sigma2, std::mt19937_64& rng) {
    if (h.rows() != s.samples.rows()) throw ShapeError("receive: channel/frame size mismatch");
    const CMatrix x = demodulate(dft, s.samples.array() - s.bias);
    std::vector<CMatrix> y;
    y.reserve(static_cast<std::size_t>(h.cols()));
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(sigma2);
    for (Eigen::Index k = 0; k < h.cols(); ++k) {
        CMatrix yk = x.array().colwise() * h.col(k).array();
        if (sigma2 > 0.0) {
            RMatrix w(s.samples.rows(), s.samples.cols());
            for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = sd * normal(rng);
            yk += demodulate(dft, w);
        }
        y.push_back(std::move(yk));
    }
    return y;
}

CMatrix mrc_combine(const std::vector<CMatrix>& y, const CMatrix& h) {
    if (y.size() != static_cast<std::size_t>(h.cols())) throw ShapeError("mrc: PD count mismatch");
    const Eigen::VectorXd g = h.cwiseAbs2().rowwise().sum();
    if (!(g.maxCoeff() > 0.0)) throw ZeroGainError("mrc: all channel gains are zero");
    CMatrix num = CMatrix::Zero(y.front().rows(), y.front().cols());
    for (std::size_t k = 0; k < y.size(); ++k)
        num += (y[k].array().colwise() * h.col(static_cast<Eigen::Index>(k)).conjugate().array()).matrix();
    for (Eigen::Index i = 0; i < num.rows(); ++i) {
        if (g(i) > 0.0)
            num.row(i) /= g(i);
        else
            num.row(i).setZero();
    }
    return num;
}

CMatrix recover_payload(const CMatrix& x_hat) {
    const Eigen::Index n = x_hat.rows();
    const Eigen::Index p = n / 2 - 1;
    CMatrix u(p, x_hat.cols());
    for (Eigen::Index i = 0; i < p; ++i)
        u.row(i) = 0.5 * (x_hat.row(i + 1) + x_hat.row(n - 1 - i).conjugate());
    return u;
}

CMatrix map_bits(const std::vector<std::uint8_t>& bits, Constellation c, int rows, int cols) {
    const int b = bits_per_symbol(c);
    if (bits.size() != static_cast<std::size_t>(rows) * cols * b) throw ShapeError("map_bits: bit count mismatch");
    CMatrix u(rows, cols);
    std::size_t at = 0;
    for (int col = 0; col < cols; ++col) {
        for (int r = 0; r < rows; ++r) {
            if (c == Constellation::bpsk) {
                u(r, col) = bits[at++] ? -1.0 : 1.0;
            } else {
                const double re = gray_level(bits[at], bits[at + 1]);
                const double im = gray_level(bits[at + 2], bits[at + 3]);
                at += 4;
                u(r, col) = std::complex<double>(re, im) * kQamNorm;
            }
        }
    }
    return u;
}

std::vector<std::uint8_t> demap(const CMatrix& u, Constellation c) {
    std::vector<std::uint8_t> bits;
    bits.reserve(static_cast<std::size_t>(u.size()) * bits_per_symbol(c));
    for (Eigen::Index col = 0; col < u.cols(); ++col) {
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            const auto v = u(r, col);
            if (c == Constellation::bpsk) {
                bits.push_back(v.real() < 0.0 ? 1 : 0);
            } else {
                std::uint8_t b0, b1, b2, b3;
                level_bits(v.real(), b0, b1);
                level_bits(v.imag(), b2, b3);
                bits.insert(bits.end(), {b0, b1, b2, b3});
            }
        }
    }
    return bits;
}

double noise_variance(double ebn0_db, Constellation c) {
    if (std::isinf(ebn0_db) && ebn0_db > 0) return 0.0;
    return 1.0 / (bits_per_symbol(c) * std::pow(10.0, ebn0_db / 10.0));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double bpsk_ber_oracle(const CMatrix& h, double ebn0_db, double power_scale) {
    const Eigen::Index n = h.rows();
    const double e = std::pow(10.0, ebn0_db / 10.0);
    double sum = 0.0;
    for (Eigen::Index i = 1; i < n / 2; ++i) {
        const double g = power_scale * h.row(i).cwiseAbs2().sum();
        sum += q_function(std::sqrt(2.0 * g * e));
    }
    return sum / static_cast<double>(n / 2 - 1);
}

std::vector<BerPoint> run_ber(const CMatrix& h, const BerSetup& setup,
                              const std::vector<double>& ebn0_db, Exec exec) {
    setup.ofdm.validate();
    const int n = setup.ofdm.subcarriers;
    if (h.rows() != n) throw ShapeError("run_ber: channel response has wrong subcarrier count");
    if (setup.num_bits == 0) throw DomainError("run_ber: num_bits must be positive");
    if (setup.frames_per_block < 1) throw DomainError("run_ber: frames_per_block must be positive");
    const Constellation c = setup.ofdm.constellation;
    const std::uint64_t bits_per_frame = static_cast<std::uint64_t>(setup.ofdm.payload()) * bits_per_symbol(c);
    const std::uint64_t frames = (setup.num_bits + bits_per_frame - 1) / bits_per_frame;
    const std::uint64_t fpb = static_cast<std::uint64_t>(setup.frames_per_block);
    const long long blocks = static_cast<long long>((frames + fpb - 1) / fpb);
    const CMatrix hs = h * std::sqrt(setup.power_scale);
    if (!(hs.size() > 0 && hs.cwiseAbs2().maxCoeff() > 0.0))
        throw ZeroGainError("run_ber: all channel gains are zero");
    const Dft dft(n);

    std::vector<BerPoint> out;
    for (std::size_t p = 0; p < ebn0_db.size(); ++p) {
        const double sigma2 = noise_variance(ebn0_db[p], c);
        std::vector<std::uint64_t> errors(static_cast<std::size_t>(blocks), 0);
        std::vector<double> imag(static_cast<std::size_t>(blocks), 0.0);
        auto block = [&](long long b) {
            auto rng = substream(setup.seed, p, static_cast<std::uint64_t>(b));
            const std::uint64_t f0 = static_cast<std::uint64_t>(b) * fpb;
            const int nf = static_cast<int>(std::min(fpb, frames - f0));
            const std::uint64_t first_bit = f0 * bits_per_frame;
            const std::uint64_t counted =
                std::min<std::uint64_t>(nf * bits_per_frame, setup.num_bits - first_bit);
            std::vector<std::uint8_t> bits(static_cast<std::size_t>(nf * bits_per_frame));
            for (auto& bit : bits) bit = static_cast<std::uint8_t>(rng() >> 63);
            const CMatrix u = map_bits(bits, c, setup.ofdm.payload(), nf);
            double residue = 0.0;
            const RMatrix v = modulate(dft, hermitian_extend(u, n), &residue);
            const BiasedSignal s = apply_dc_bias(v, setup.ofdm.bias_sigma, setup.ofdm.clipping);
            const auto y = channel_and_receive(dft, s, hs, sigma2, rng);
            const auto got = demap(recover_payload(mrc_combine(y, hs)), c);
            std::uint64_t e = 0;
            for (std::uint64_t i = 0; i < counted; ++i) e += got[i] != bits[i];
            errors[static_cast<std::size_t>(b)] = e;
            imag[static_cast<std::size_t>(b)] = residue;
        };
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
            for (long long b = 0; b < blocks; ++b) block(b);
        } else {
            for (long long b = 0; b < blocks; ++b) block(b);
        }
        BerPoint pt;
        pt.ebn0_db = ebn0_db[p];
        pt.num_bits = setup.num_bits;
        for (std::size_t b = 0; b < errors.size(); ++b) {
            pt.num_errors += errors[b];
            pt.max_imag = std::max(pt.max_imag, imag[b]);
        }
        pt.ber = static_cast<double>(pt.num_errors) / static_cast<double>(pt.num_bits);
        out.push_back(pt);
    }
    return out;
}

std::vector<BerPoint> run_ber(const Scenario& s, const RadiationPattern& pattern,
                              const Vec3& device, const Aiming& aiming, const BerSetup& setup,
                              const std::vector<double>& ebn0_db, Exec exec) {
    const ChannelState ch = compute_channel(s, pattern, device, aiming);
    return run_ber(subcarrier_response(ch, setup.ofdm.subcarriers, s.sample_rate), setup, ebn0_db, exec);
}

}  // namespace oisac
