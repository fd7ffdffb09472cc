#pragma once

#include <json.hpp>

#include "ctoda/grunsky.hpp"
#include "ctoda/pairspace.hpp"
#include "ctoda/welding.hpp"

namespace ctoda {

using Json = nlohmann::ordered_json;

// ComplexSeries <-> {"lo": int, "hi": int, "re": [...], "im": [...]}
Json series_to_json(const ComplexSeries& s);
ComplexSeries series_from_json(const Json& j);

// ConformalPair <-> {"f": series, "g": series, "m": int}
Json pair_to_json(const ConformalPair& p);
ConformalPair pair_from_json(const Json& j);

// MomentSet -> {"order": N, "source": ..., "t": [[n,re,im],...], "v": [...],
//               "t0_alt": [re,im]}
Json moments_to_json(const MomentSet& ms);
MomentSet moments_from_json(const Json& j);

// GrunskyTable -> {"order": N, "entries": [[m,n,re,im],...]} with m >= n
// only (symmetry); expands on load.
Json grunsky_to_json(const GrunskyTable& t);
GrunskyTable grunsky_from_json(const Json& j);

// CircleHomeo -> {"m": int, "gamma_re": [...], "gamma_im": [...]};
// gamma^{-1} is recomputed on load.
Json homeo_to_json(const CircleHomeo& h);
CircleHomeo homeo_from_json(const Json& j);

}  // namespace ctoda
