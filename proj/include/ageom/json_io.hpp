#pragma once

// JSON encoding shared by the CLI and the reports.
//
// Matrix: {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order.
// Form:   the matrix of A plus "psd_checked": true once validated.

#include <json.hpp>

#include "ageom/a_space.hpp"
#include "ageom/geodesic.hpp"
#include "ageom/isometry.hpp"
#include "ageom/krein.hpp"
#include "ageom/sequence.hpp"

namespace ageom {

using json = nlohmann::ordered_json;

json to_json(const CMatrix& m);
/// Throws InvalidInput on malformed input.
CMatrix matrix_from_json(const json& j);

json to_json(const AForm& form);
/// Accepts a matrix object; "psd_checked" is ignored on input since the
/// form is always revalidated.
FormRef form_from_json(const json& j);

json to_json(const DouglasResult& r);
json to_json(const IsometryCheck& c);
json to_json(const ProofChecks& c);
json to_json(const KreinReport& r);
json to_json(const ExtensionCheck& c);
json to_json(const RaceReport& r);
json to_json(const BoundedReport& r);
json to_json(const AdjointabilityReport& r);
json to_json(const WoldReport& r);

} // namespace ageom
