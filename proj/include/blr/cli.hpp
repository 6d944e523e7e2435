#pragma once

namespace blr {

/// Entry point. Exit codes: 0 success, 1 data/config error, 2 numerical
/// failure (NotPositiveDefinite, NoSignFixedPoint).
int cli_main(int argc, const char* const* argv);

}  // namespace blr
