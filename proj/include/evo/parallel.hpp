#pragma once

namespace evo {

/// Selects the OpenMP kernel or the serial reference kept for testing. Both
/// produce identical results for identical inputs.
enum class Execution { serial, parallel };

/// Worker threads OpenMP would use; 1 when built without OpenMP.
int max_threads();

}  // namespace evo
