#pragma once

// Clustered (Saleh-Valenzuela) mmWave channel synthesis for a BS -> LIS -> UE link.
//
// The BS and UE carry uniform linear arrays; the LIS is a uniform planar array
// of lis_y x lis_z passive elements. Path gains follow a Rician split: the
// first path of each hop is LOS, the remainder NLOS attenuated by the Rician
// factor. All routines are pure given the caller's Rng.

#include <vector>

#include "lisbeam/types.hpp"

namespace lisbeam {

struct ArrayGeometry {
    int n_tx = 64;
    int n_rx = 64;
    int lis_y = 16;
    int lis_z = 16;
    double spacing_ratio = 0.5; // d / lambda

    int lis_elements() const { return lis_y * lis_z; }
    void validate() const;
};

// Large-scale link parameters. Powers are linear milliwatts.
struct LinkBudget {
    double a_intercept = 61.4;     // dB
    double b_exponent = 2.0;
    double shadow_sigma = 5.8;     // dB
    double rician_mu = 10.0;       // dB, LOS-to-NLOS power offset
    double carrier_hz = 28e9;
    double bandwidth_hz = 251.1886e6;
    double noise_power = 1e-9;     // -90 dBm
    double tx_power = 1.0;         // 0 dBm
    double tx_antenna_gain = 1.0;  // linear factor on H_eff
    double rx_antenna_gain = 1.0;  // linear factor on H_eff

    void validate() const;
};

struct LinkDistances {
    double bs_lis_m = 148.0;
    double lis_ue_m = 9.8;
};

struct BsLisPath {
    cdouble gain;
    double aod_bs = 0.0; // ULA departure angle at the BS
    double aoa_az = 0.0; // LIS arrival azimuth
    double aoa_el = 0.0; // LIS arrival elevation
};

struct LisUePath {
    cdouble gain;
    double aod_az = 0.0; // LIS departure azimuth
    double aod_el = 0.0; // LIS departure elevation
    double aoa_ue = 0.0; // ULA arrival angle at the UE
};

struct PathSet {
    std::vector<BsLisPath> bs_lis; // P paths, gains alpha_i
    std::vector<LisUePath> lis_ue; // L paths, gains beta_i
};

struct MmWaveChannel {
    CMat g; // M x N_t, BS -> LIS
    CMat r; // N_r x M, LIS -> UE
    double tx_gain = 1.0;
    double rx_gain = 1.0;

    int lis_elements() const { return static_cast<int>(g.rows()); }
};

// p^{ij} = conj(a_LIS,T(departure i)) .* a_LIS,R(arrival j), stored row-major over (i, j).
class CompositePathBank {
public:
    CompositePathBank(int l_paths, int p_paths, int m);

    int l_paths() const { return l_paths_; }
    int p_paths() const { return p_paths_; }
    int elements() const { return m_; }

    const CVec& at(int i, int j) const { return vectors_[index(i, j)]; }
    CVec& at(int i, int j) { return vectors_[index(i, j)]; }

private:
    std::size_t index(int i, int j) const;

    int l_paths_;
    int p_paths_;
    int m_;
    std::vector<CVec> vectors_;
};

// Normalized ULA steering vector, entry k = exp(j 2 pi d/lambda k sin(gamma)) / sqrt(n).
CVec ula_response(double gamma, int n, double spacing_ratio);

// Normalized UPA steering vector. Element (m1, m2) sits at index m1 * m_z + m2.
CVec upa_response(double theta, double eta, int m_y, int m_z, double spacing_ratio);

// kappa = a + 10 b log10(d) + xi, xi ~ N(0, shadow_sigma^2). Throws DomainError for d <= 0.
double path_loss_db(double distance_m, const LinkBudget& budget, Rng& rng);

// Draw one channel realization's paths. Path 0 of each hop is LOS; gains already
// include the sqrt(N_t M / P) and sqrt(M N_r / L) array prefactors.
PathSet sample_paths(Rng& rng, const ArrayGeometry& geometry, const LinkBudget& budget,
                     const LinkDistances& distances, int p_paths, int l_paths);

// Stable sort of both hops by |gain|, descending.
PathSet sort_paths_descending(PathSet paths);

MmWaveChannel assemble_channels(const PathSet& paths, const ArrayGeometry& geometry, const LinkBudget& budget);

CompositePathBank composite_path_vectors(const PathSet& paths, const ArrayGeometry& geometry);

// tx_gain * rx_gain * R * diag(conj(v)) * G. `v` is the LIS state vector (v = diag(Phi^H)).
CMat effective_channel(const MmWaveChannel& channel, const CVec& v);

// Adds i.i.d. Uniform(-beta, beta) errors to every angle; gains are left untouched.
PathSet perturb_angles(PathSet paths, double beta, Rng& rng);

} // namespace lisbeam
