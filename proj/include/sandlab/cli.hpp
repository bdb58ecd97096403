#pragma once

namespace sandlab {

// Exit codes: 0 success, 1 input or usage error, 2 numerical tolerance failure.
int cli_main(int argc, char** argv);

}  // namespace sandlab
