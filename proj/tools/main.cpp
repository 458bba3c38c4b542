#include <cstdio>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::fprintf(stderr, "gensplat: no subcommands wired yet\n");
  return 1;
}
