#include <iostream>

#include "knotforge/laurent.hpp"

int main() {
    std::cout << "knotforge (under construction)\n";
    return 0;
}
