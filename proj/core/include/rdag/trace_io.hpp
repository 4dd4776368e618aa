#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rdag/engine.hpp"

namespace rdag {

/// step,time,agent_id,level,role,tau_0..tau_{d-1},err,u_norm,gamma,retained_hash
std::string trace_csv_header(int dimension);

/// One row per (record, agent). Doubles use %.17g so files compare byte for byte.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace, const World& world);

std::string bound_report_json(const BoundReport& report);

}  // namespace rdag
