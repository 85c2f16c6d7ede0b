#pragma once

namespace advrec::cli {

/// Entry point of the `advrec` binary. Exit status 0 ok, 1 data error, 2 usage error.
int run(int argc, const char* const* argv);

} // namespace advrec::cli
