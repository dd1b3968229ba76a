#pragma once

#include <json.hpp>

#include <string>

#include "frobwhit/hierarchy.hpp"

namespace frobwhit {

using Json = nlohmann::ordered_json;

Json to_json(const Complex& c);
Complex complex_from_json(const Json& j);

Json to_json(const LaurentSeries& f);
LaurentSeries series_from_json(const Json& j);

Json to_json(const CircleGrid& g);
CircleGrid grid_from_json(const Json& j);

Json to_json(const PointMn& p);
PointMn point_from_json(const Json& j);

Json to_json(const FlatCoords& fc);
FlatCoords flat_from_json(const Json& j);

Json to_json(const LoopPoint& p);
LoopPoint loop_point_from_json(const Json& j);

}  // namespace frobwhit
