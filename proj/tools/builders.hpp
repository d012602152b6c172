#pragma once

#include "tfio/coeff.hpp"
#include "tfio/config.hpp"
#include "tfio/gabor.hpp"
#include "tfio/grid.hpp"
#include "tfio/symbols.hpp"
#include "tfio/weights.hpp"

// config-grammar -> library objects; every unresolved name throws with the
// offending spelling so the CLI can report it verbatim
namespace tfio::cli {

UniformGrid grid_from(const ExperimentConfig& cfg);

// one | gauss | sg(m1,m2,m3) | bracket(e0,e1,..) | peaked(a) |
// rand(waves,amp,seed) | tbracket(m)
SymbolSpec resolve_symbol(const Term& t, int arity, int dim);

// phase.zero | phase.linear | phase.shifted(c) | phase.perturbed(eps)
PhaseSpec resolve_phase(const Term& t, int dim);
std::vector<PhaseSpec> resolve_phases(const ExperimentConfig& cfg, int arity, int dim);

// one | omega(s) | v(s1,s2) | tensor(w1,w2,..) | pullbackA(r,d,w) | pullbackB(r,d,w)
WeightSpec resolve_weight(const Term& t, int dim_hint);

// norm(order=[..], exps=[..]) with primes allowed in index names
NestedNormSpec resolve_norm_spec(const Term& t);

// gaussian | harmonic(a) | random(band=,width=,seed=)
SampledField resolve_signal(const Term& t, const UniformGrid& g, std::uint64_t seed);

GaborSystem system_from(const ExperimentConfig& cfg, const UniformGrid& g);

double exponent_from(const ExperimentConfig& cfg, const std::string& key, double fallback);

} // namespace tfio::cli
