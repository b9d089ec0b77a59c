#ifndef SAND_CLI_HPP
#define SAND_CLI_HPP

namespace sand {

// Full command-line front end (generate / run / sweep / report). Returns the
// process exit status; errors print a one-line diagnostic to stderr.
int run_cli(int argc, const char* const* argv);

} // namespace sand

#endif
