#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace sshchain {

// Shipped scenario configurations. The same JSON text lives under presets/ in
// the repository; `sshchain presets dump <name>` prints it verbatim.
struct Preset {
    std::string_view name;
    std::string_view json_text;
};

namespace detail {

inline constexpr std::string_view fig3_spectrum = R"json({
  "kind": "spectrum",
  "output_prefix": "fig3",
  "probe_site": 2,
  "fwhm_khz": 65.0,
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 400.0,
    "j_inter_khz": 400.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

inline constexpr std::string_view fig4_eigensweep = R"json({
  "kind": "eigensweep",
  "output_prefix": "fig4",
  "ratio_grid": {"min": 0.1, "max": 5.0, "count": 60, "spacing": "log"},
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 160.0,
    "j_inter_khz": 400.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

inline constexpr std::string_view fig4_bands = R"json({
  "kind": "bands",
  "output_prefix": "fig4_bands",
  "n_k": 181,
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 160.0,
    "j_inter_khz": 800.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

inline constexpr std::string_view fig5a_quench = R"json({
  "kind": "quench",
  "output_prefix": "fig5a",
  "initial_site": 4,
  "t_max_us": 15.0,
  "dt_us": 0.05,
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 800.0,
    "j_inter_khz": 160.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

inline constexpr std::string_view fig5_chiral_ratio02 = R"json({
  "kind": "chiral",
  "output_prefix": "fig5_ratio02",
  "initial_site": 4,
  "t_max_us": 15.0,
  "dt_us": 0.05,
  "convention": "relative",
  "t_avg_us": 15.0,
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 160.0,
    "j_inter_khz": 800.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

inline constexpr std::string_view fig5_chiral_ratio5 = R"json({
  "kind": "chiral",
  "output_prefix": "fig5_ratio5",
  "initial_site": 4,
  "t_max_us": 15.0,
  "dt_us": 0.05,
  "convention": "relative",
  "t_avg_us": 15.0,
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 800.0,
    "j_inter_khz": 160.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

inline constexpr std::string_view fig6_chiral_sweep = R"json({
  "kind": "chiral",
  "output_prefix": "fig6",
  "initial_site": 4,
  "t_avg_us": 15.0,
  "pairs_khz": [[160.0, 800.0], [400.0, 800.0], [400.0, 400.0], [800.0, 400.0], [800.0, 160.0]],
  "sweep_j1_khz": [160.0, 400.0, 800.0],
  "ratio_grid": {"min": 0.1, "max": 5.0, "count": 33, "spacing": "log"},
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 160.0,
    "j_inter_khz": 800.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

inline constexpr std::string_view fit_roundtrip_fig3 = R"json({
  "kind": "fit-roundtrip",
  "output_prefix": "fit_fig3",
  "probe_site": 2,
  "fwhm_khz": 65.0,
  "n_peaks": 6,
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 400.0,
    "j_inter_khz": 400.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

inline constexpr std::string_view disorder_eigs_sigma50 = R"json({
  "kind": "disorder",
  "output_prefix": "disorder_eigs",
  "n_samples": 500,
  "observable": "eigenvalues",
  "disorder": {"sigma_j_khz": 0.0, "sigma_u_khz": 50.0, "distribution": "uniform-bounded", "seed": 42},
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 160.0,
    "j_inter_khz": 800.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

inline constexpr std::string_view disorder_winding_sigma20 = R"json({
  "kind": "disorder",
  "output_prefix": "disorder_winding",
  "n_samples": 200,
  "observable": "winding_estimate",
  "initial_site": 4,
  "t_avg_us": 15.0,
  "disorder": {"sigma_j_khz": 20.0, "sigma_u_khz": 0.0, "distribution": "uniform-bounded", "seed": 42},
  "spec": {
    "n_cells": 3,
    "j_intra_khz": 160.0,
    "j_inter_khz": 800.0,
    "bond_overrides_khz": null,
    "onsite_khz": null
  }
}
)json";

} // namespace detail

inline const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = {
        {"fig3_spectrum", detail::fig3_spectrum},
        {"fig4_eigensweep", detail::fig4_eigensweep},
        {"fig4_bands", detail::fig4_bands},
        {"fig5a_quench", detail::fig5a_quench},
        {"fig5_chiral_ratio02", detail::fig5_chiral_ratio02},
        {"fig5_chiral_ratio5", detail::fig5_chiral_ratio5},
        {"fig6_chiral_sweep", detail::fig6_chiral_sweep},
        {"fit_roundtrip_fig3", detail::fit_roundtrip_fig3},
        {"disorder_eigs_sigma50", detail::disorder_eigs_sigma50},
        {"disorder_winding_sigma20", detail::disorder_winding_sigma20},
    };
    return all;
}

inline std::optional<std::string_view> preset_json(std::string_view name)
{
    for (const Preset& p : presets())
        if (p.name == name)
            return p.json_text;
    return std::nullopt;
}

} // namespace sshchain
