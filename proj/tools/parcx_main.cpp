#include <cstdio>

int main() {
    std::puts("parcx: command-line interface not wired up yet");
    return 2;
}
