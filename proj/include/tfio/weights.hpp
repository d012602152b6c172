#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tfio {

// The invertible phase-space map pairing an STFT on the kernel side with an
// STFT on the symbol side. Vectors are laid out as (u_1..u_{r+1}, v_1..v_{r+1})
// with d entries per slot; forward maps to ((u_1,-v_2,..,-v_{r+1}),(v_1,u_2,..,u_{r+1})).
struct PhaseSpaceTransform {
    int r = 1;
    int d = 1;

    int vec_len() const { return 2 * d * (r + 1); }
    std::vector<double> forward(std::span<const double> x) const;
    std::vector<double> inverse(std::span<const double> x) const;
};

// Evaluable positive weight on R^n. Built-in kinds: the polynomial weight
// <z>^s = (1+|z|^2)^{s/2}, tensor products, pullbacks along an invertible
// linear map, the three-factor split weight <x>^{s2}<xi>^{s1}<eta>^{s2}, and
// the constant 1.
class WeightSpec {
public:
    static WeightSpec one(int dim);
    static WeightSpec omega(double s, int dim);
    static WeightSpec tensor(std::vector<WeightSpec> factors);
    static WeightSpec pullback(WeightSpec base,
                               std::function<std::vector<double>(std::span<const double>)> map,
                               std::string map_name);
    static WeightSpec pullback_forward(WeightSpec base, const PhaseSpaceTransform& t);
    static WeightSpec pullback_inverse(WeightSpec base, const PhaseSpaceTransform& t);
    // <x>^{s2} <xi>^{s1} <eta>^{s2} on R^{3d}
    static WeightSpec v_split(double s1, double s2, int d);

    double eval(std::span<const double> x) const;
    int dim() const { return dim_; }
    const std::string& describe() const { return text_; }

private:
    WeightSpec() = default;
    int dim_ = 1;
    std::string text_;
    std::function<double(std::span<const double>)> fn_;
};

inline double eval_weight(const WeightSpec& w, std::span<const double> x) { return w.eval(x); }

// <z>^s on R^n
double bracket_pow(std::span<const double> z, double s);
double bracket_pow(double z, double s);

struct ModerateReport {
    double constant = 0.0; // max sampled ratio w(x+y) / (<x>^s w(y))
    bool pass = false;     // finite
};

// Ratio at one sampled pair.
double moderate_ratio(const WeightSpec& w, double s, std::span<const double> x,
                      std::span<const double> y);

// Samples pairs in [-box,box]^{2 dim} (deterministic: a coarse pair lattice
// plus seeded uniform draws, always containing (e1,e1) when box >= 1) and
// reports the largest moderateness ratio.
ModerateReport check_s_moderate(const WeightSpec& w, double s, int sample_count, double box,
                                std::uint64_t seed = 0x5eedull);

} // namespace tfio
