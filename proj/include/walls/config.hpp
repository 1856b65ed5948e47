#ifndef WALLS_CONFIG_HPP
#define WALLS_CONFIG_HPP

#include <string>
#include <vector>

#include "walls/cluster.hpp"
#include "walls/dp5.hpp"
#include "walls/lattice.hpp"
#include "walls/tropical.hpp"

namespace walls {

// Self-describing JSON configs, one schema tag per module. Unknown fields
// are rejected so golden files stay strict.
Rat parse_rat(const std::string& s);

ToricModel load_toric_model(const std::string& json_text);
FixedData load_cluster_data(const std::string& json_text, Seed& seed_out);
Dp5Params load_dp5_params(const std::string& json_text);
BlowupChain load_chain(const std::string& json_text, RatPoint& stop_out);

std::string schema_of(const std::string& json_text);

// FNV-1a of the canonically re-serialised config plus the order cap; keys
// the on-disk diagram cache.
std::string config_hash(const std::string& json_text, int order_cap);

}  // namespace walls

#endif
