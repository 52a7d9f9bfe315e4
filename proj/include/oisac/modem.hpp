#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "oisac/channel.hpp"
#include "oisac/kernels.hpp"

namespace oisac {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

enum class Constellation { bpsk, qam16 };

int bits_per_symbol(Constellation c);

struct OfdmConfig {
    int subcarriers = 32;
    Constellation constellation = Constellation::bpsk;
    double bias_sigma = 3.0;
    bool clipping = false;

    void validate() const;
    int payload() const { return subcarriers / 2 - 1; }
};

/// Unitary N-point DFT pair (1/sqrt(N) both ways) over the columns of a matrix.
class Dft {
public:
    explicit Dft(int n);
    ~Dft();
    Dft(const Dft&) = delete;
    Dft& operator=(const Dft&) = delete;

    int size() const { return n_; }
    CMatrix forward(const CMatrix& x) const;
    CMatrix inverse(const CMatrix& x) const;

private:
    struct Plans;
    int n_;
    std::unique_ptr<Plans> plans_;
};

/// [0, u_1..u_{N/2-1}, 0, conj(u_{N/2-1})..conj(u_1)] per column.
CMatrix hermitian_extend(const CMatrix& u, int n);

/// Real time samples V = F^H X / sqrt(N). `max_imag` receives the largest
/// discarded imaginary part.
RMatrix modulate(const Dft& dft, const CMatrix& x, double* max_imag = nullptr);
CMatrix demodulate(const Dft& dft, const RMatrix& v);

struct BiasedSignal {
    RMatrix samples;
    double bias = 0.0;
    std::size_t clipped = 0;
};

/// s = V + bias_sigma * std(V); negatives set to zero when clipping.
BiasedSignal apply_dc_bias(const RMatrix& v, double bias_sigma, bool clipping);

/// Per-subcarrier response H_k[n] = sum_m h_mk exp(-j 2 pi f_n tau_mk fs / N)
/// with signed frequency index f_n; N x kappa.
CMatrix subcarrier_response(const ChannelState& ch, int n, double sample_rate);

/// Bias removed, DFT taken, per-PD frequency-domain observation
/// Y_k = H_k X + W_k where W_k is the DFT of real AWGN of variance sigma2.
std::vector<CMatrix> channel_and_receive(const Dft& dft, const BiasedSignal& s, const CMatrix& h,
                                         double sigma2, std::mt19937_64& rng);

/// x_hat[n] = sum_k conj(H_k[n]) Y_k[n] / sum_k |H_k[n]|^2. Throws ZeroGainError.
CMatrix mrc_combine(const std::vector<CMatrix>& y, const CMatrix& h);

/// U_hat[i] = (X_hat[i+1] + conj(X_hat[N-1-i])) / 2.
CMatrix recover_payload(const CMatrix& x_hat);

/// Unit-energy mapping: BPSK 0 -> +1; Gray 16QAM with levels {-3,-1,1,3}/sqrt(10).
CMatrix map_bits(const std::vector<std::uint8_t>& bits, Constellation c, int rows, int cols);
std::vector<std::uint8_t> demap(const CMatrix& u, Constellation c);

/// Per-sample noise variance for a transmit-referenced Eb/N0 (dB) with unit
/// symbol energy: sigma2 = 1 / (bits_per_symbol * Eb/N0). Infinite Eb/N0 gives zero.
double noise_variance(double ebn0_db, Constellation c);

double q_function(double x);

/// Analytic BPSK BER: mean over payload subcarriers of Q(sqrt(2 G_n Eb/N0)),
/// G_n = power_scale * sum_k |H_k[n]|^2.
double bpsk_ber_oracle(const CMatrix& h, double ebn0_db, double power_scale = 1.0);

struct BerPoint {
    double ebn0_db = 0.0;
    double ber = 0.0;
    std::uint64_t num_bits = 0;
    std::uint64_t num_errors = 0;
    double max_imag = 0.0;
};

struct BerSetup {
    OfdmConfig ofdm;
    std::uint64_t num_bits = 200000;
    std::uint64_t seed = 1;
    /// Fraction of the transmit power given to communication.
    double power_scale = 1.0;
    int frames_per_block = 64;
};

/// Monte Carlo BER of the full chain over channel response `h`.
std::vector<BerPoint> run_ber(const CMatrix& h, const BerSetup& setup,
                              const std::vector<double>& ebn0_db, Exec exec = Exec::parallel);

/// Convenience overload: builds the channel for a device.
std::vector<BerPoint> run_ber(const Scenario& s, const RadiationPattern& pattern,
                              const Vec3& device, const Aiming& aiming, const BerSetup& setup,
                              const std::vector<double>& ebn0_db, Exec exec = Exec::parallel);

}  // namespace oisac
