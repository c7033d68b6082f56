#ifndef JSCC_MODELS_HPP
#define JSCC_MODELS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

// Memoryless sources and channels with their information-theoretic
// descriptors: capacity and dispersion on the channel side, rate-distortion,
// rate-dispersion and d-tilted information on the source side. Closed forms
// for the binary and Gaussian pairs; Blahut-Arimoto for generic finite
// models. Rates and entropies are in bits; the tilted exponent lambda* is
// kept in nats because it only ever feeds exp().

namespace jscc {

using Matrix = std::vector<std::vector<double>>;

enum class SourceKind { Bms, Gms, ErasureDms, LogLossDms, GenericFinite };
enum class ChannelKind { Bsc, Awgn, Dec, GenericFinite };
enum class PowerConstraint { Equal, Maximal };

struct SourceModel {
  SourceKind kind = SourceKind::Bms;
  double bias = 0.5;       // Bms: P[S=1], <= 1/2
  double variance = 1.0;   // Gms: sigma_S^2
  int alphabet_size = 2;   // ErasureDms (equiprobable) / LogLossDms
  std::vector<double> pmf;  // GenericFinite and LogLossDms
  Matrix distortion;        // GenericFinite: |S| x |Zhat|

  static SourceModel bms(double p);
  static SourceModel gms(double sigma2);
  static SourceModel erasure_dms(int m);
  static SourceModel log_loss_dms(std::vector<double> pmf);
  static SourceModel generic(std::vector<double> pmf, Matrix distortion);

  double d_min() const;
  double d_max() const;
  double entropy_bits() const;  // throws for Gms
};

struct ChannelModel {
  ChannelKind kind = ChannelKind::Bsc;
  double crossover = 0.0;  // Bsc / Dec
  double snr = 1.0;        // Awgn: P
  PowerConstraint constraint = PowerConstraint::Equal;
  int alphabet_size = 2;   // Dec input alphabet
  Matrix transition;       // GenericFinite, rows sum to 1

  static ChannelModel bsc(double delta);
  static ChannelModel awgn(double snr, PowerConstraint c = PowerConstraint::Equal);
  static ChannelModel dec(double delta, int m);
  static ChannelModel generic(Matrix transition);
};

struct Descriptors {
  double capacity = 0.0;            // C, bits per channel use
  double channel_dispersion = 0.0;  // V, bits^2
  std::function<double(double)> rate;                    // R(d), bits
  std::function<double(double)> source_dispersion;       // scriptV(d), bits^2
  std::function<double(double)> lambda_star;             // -R'(d) in nats
  std::function<double(double)> distortion_rate;         // D(R), R in bits
  std::function<double(double)> distortion_rate_deriv;   // dD/dR, R in bits
  double d_min = 0.0;
  double d_max = 0.0;
  double source_entropy = 0.0;  // bits; +inf for Gms
};

Descriptors make_descriptors(const SourceModel& source, const ChannelModel& channel);

// ---- Blahut-Arimoto ----

struct CapacitySolution {
  double capacity_bits;
  std::vector<double> input;   // capacity-achieving P_X*
  std::vector<double> output;  // induced P_Y*
  double dispersion_bits2;     // Var[i(X*;Y*)]
  int iterations;
};
CapacitySolution blahut_arimoto_capacity(const Matrix& transition, double tol = 1e-10,
                                         int max_iterations = 200000);

struct RateDistortionSolution {
  double rate_bits;
  double slope_nats;            // s = -lambda* from the parametric family
  std::vector<double> z_marginal;  // P_Z*
  int iterations;
};
RateDistortionSolution blahut_arimoto_rate_distortion(const std::vector<double>& pmf,
                                                      const Matrix& distortion, double d,
                                                      double tol = 1e-10,
                                                      int max_iterations = 200000);

// ---- d-tilted information ----

// Block statistic: Hamming weight for Bms, |s|^2/sigma^2 for Gms.
struct BlockSummary {
  std::int64_t k;
  double stat;
};

// j_{S^k}(s^k, d) in bits for Bms / Gms blocks.
double tilted_information(const SourceModel& source, double d, const BlockSummary& block);
// Per-symbol j_S(s, d) in bits for the discrete kinds.
double tilted_information_symbol(const SourceModel& source, double d, int symbol);

// max over reproduction letters z of E[exp(lambda* d - lambda* d(S,z) + j_S(S,d))];
// equals 1 on the support of P_Z* and never exceeds 1.
double csiszar_check(const SourceModel& source, double d);

// GenericFinite system from a JSON document
// {"source_pmf": [...], "distortion": [[...]], "channel": [[...]]}.
std::pair<SourceModel, ChannelModel> load_generic_models(const std::string& json_text);

}  // namespace jscc

#endif
