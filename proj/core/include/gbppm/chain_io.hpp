#pragma once

#include <iosfwd>
#include <string>

#include "gbppm/gibbs.hpp"

namespace gbppm {

inline constexpr int chain_schema_version = 1;

// Newline-delimited JSON. First line is a header
//   {"type":"meta","schema":1,"n":..,"d":..,"K":..,"model":{..},"config":{..}}
// followed by one record per retained draw
//   {"type":"sample","index":t,"labels":[1,2,..],"lambda":..,"loss":..}
// Labels are 1-based.
void write_chain(std::ostream& out, const ChainSamples& samples);
void save_chain(const std::string& path, const ChainSamples& samples);

// Reads the format above. Trace vectors are left empty.
ChainSamples read_chain(std::istream& in);
ChainSamples load_chain(const std::string& path);

// CSV "iteration,loss,lambda" over every sweep.
void write_trace_csv(std::ostream& out, const ChainSamples& samples);

}  // namespace gbppm
