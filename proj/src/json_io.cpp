#include "ageom/json_io.hpp"

#include <string>

#include "ageom/error.hpp"

namespace ageom {

json to_json(const CMatrix& m)
{
    json data = json::array();
    for (const auto& z : m.data())
        data.push_back(json::array({z.real(), z.imag()}));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw Error(ErrorCode::InvalidInput, "matrix JSON needs rows, cols and data");
    if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned() || !j["data"].is_array())
        throw Error(ErrorCode::InvalidInput, "matrix JSON: rows and cols must be non-negative integers");
    const auto rows = j["rows"].get<std::size_t>();
    const auto cols = j["cols"].get<std::size_t>();
    const json& data = j["data"];
    if (data.size() != rows * cols)
        throw Error(ErrorCode::InvalidInput, "matrix JSON: expected " + std::to_string(rows * cols) +
                                                 " entries, got " + std::to_string(data.size()));
    std::vector<cplx> entries;
    entries.reserve(data.size());
    for (const auto& e : data) {
        if (e.is_number()) {
            entries.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            entries.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else {
            throw Error(ErrorCode::InvalidInput, "matrix JSON: entries must be [re, im] pairs");
        }
    }
    return {rows, cols, std::move(entries)};
}

json to_json(const AForm& form)
{
    json j = to_json(form.matrix());
    j["psd_checked"] = true;
    return j;
}

FormRef form_from_json(const json& j) { return AForm::make(matrix_from_json(j)); }

json to_json(const DouglasResult& r)
{
    json j{{"solvable", r.solvable},
           {"range_inclusion", r.range_inclusion},
           {"lambda_bounded", r.lambda_bounded},
           {"agree", r.agree()},
           {"rank", r.rank},
           {"residual", r.residual},
           {"complement_mass", r.complement_mass}};
    j["lambda"] = r.lambda ? json(*r.lambda) : json(nullptr);
    j["X"] = r.x ? to_json(*r.x) : json(nullptr);
    return j;
}

json to_json(const IsometryCheck& c)
{
    return {{"isometric", c.isometric}, {"defect", c.defect}, {"lambda_witness", c.lambda_witness}};
}

json to_json(const ProofChecks& c)
{
    return {{"gram_lambda_min", c.gram_lambda_min}, {"qm_idempotence", c.qm_idempotence},
            {"square_identity", c.square_identity}, {"row_identity", c.row_identity},
            {"column_identity", c.column_identity}, {"b0_range", c.b0_range},
            {"b1_range", c.b1_range},               {"norm_qm", c.norm_qm},
            {"norm_bbar", c.norm_bbar},             {"ok", c.ok()}};
}

json to_json(const KreinReport& r)
{
    json j{{"method", std::string(to_string(r.method))},
           {"m_used", r.m_used},
           {"norm_Z", r.norm_z},
           {"constraint_residual", r.constraint_residual},
           {"hermiticity", r.hermiticity},
           {"iterations", r.iterations},
           {"m_tried", r.m_tried}};
    j["proof_checks"] = r.checks ? to_json(*r.checks) : json(nullptr);
    j["Z"] = to_json(r.z);
    return j;
}

json to_json(const ExtensionCheck& c)
{
    return {{"hermiticity", c.hermiticity},
            {"constraint_residual", c.constraint_residual},
            {"norm", c.norm},
            {"ok", c.ok}};
}

json to_json(const RaceReport& r)
{
    return {{"t1", r.t1},
            {"geodesic_length", r.geodesic_length},
            {"competitor_lengths", r.competitor_lengths},
            {"perturbation_norms", r.perturbation_norms},
            {"violations", r.violations},
            {"seed", r.seed},
            {"min_length", r.min_length},
            {"median_length", r.median_length},
            {"max_endpoint_error", r.max_endpoint_error}};
}

namespace {

json witnesses(const std::vector<RatioWitness>& w)
{
    json a = json::array();
    for (const auto& x : w)
        a.push_back({{"index", x.index}, {"ratio", x.ratio}});
    return a;
}

} // namespace

json to_json(const BoundedReport& r)
{
    return {{"bounded_evidence", r.bounded_evidence},
            {"sup_ratio", r.sup_ratio},
            {"sup_index", r.sup_index},
            {"trend", to_string(r.trend)},
            {"window_sups", witnesses(r.window_sups)}};
}

json to_json(const AdjointabilityReport& r)
{
    return {{"verdict", to_string(r.verdict)},
            {"l_isometry", r.l_isometry},
            {"operator", to_json(r.op)},
            {"adjoint", to_json(r.adjoint)},
            {"witness", witnesses(r.witness)}};
}

json to_json(const WoldReport& r)
{
    json layers = json::array();
    for (const auto& l : r.shift_layers)
        layers.push_back(l);
    return {{"first", r.first},
            {"horizon", r.horizon},
            {"unitary_indices", r.unitary},
            {"wandering_indices", r.wandering},
            {"shift_layers", std::move(layers)},
            {"undetermined", r.undetermined},
            {"partitions", r.partitions()}};
}

} // namespace ageom
