#pragma once

#include <string>

#include "json.hpp"
#include "riccert/criteria.hpp"
#include "riccert/harness.hpp"
#include "riccert/ode.hpp"

namespace riccert {

using json = nlohmann::ordered_json;

json to_json(const GridEvidence& ev);
json to_json(const Certificate& cert);
json to_json(const VerificationReport& rep);
json to_json(const EscapeReport& rep);

/// Write text to path via a same-directory temporary and rename, so readers
/// never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& text);
void write_json_atomic(const std::string& path, const json& doc);

/// Sampled trajectory tables. Scalar problems get header "t,y,dy"; 3-D system
/// trajectories get "t,phi,psi,chi". n is the number of sample rows.
void write_riccati_csv(const std::string& path, const Trajectory& traj, std::size_t n = 1001);
void write_system_csv(const std::string& path, const Trajectory& traj, std::size_t n = 1001);

}  // namespace riccert
