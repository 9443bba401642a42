#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "umbrella/classify.hpp"
#include "umbrella/conic.hpp"
#include "umbrella/experiment.hpp"
#include "umbrella/foliation.hpp"
#include "umbrella/mapping.hpp"
#include "umbrella/singular_locus.hpp"

namespace umbrella {

using nlohmann::json;

/// Mapping spec: {"ell", "A", "p", "form", "a"?, "b"?}. For special forms
/// "A" may be omitted; when present it must match the form.
GDSMapping mapping_from_json(const json& j);
json mapping_to_json(const GDSMapping& m);

json conic_to_json(const Conic& c);
Conic conic_from_json(const json& j);

json singular_report_json(const SingularLocus& locus);
json class_report_json(const MapClass& c);
json oracle_report_json(const TangencyReport& r);
json degeneracy_report_json(const DegeneracyReport& r);
json experiment_report_json(const ExperimentReport& r);

}  // namespace umbrella
