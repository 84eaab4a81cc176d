#include "dss/dss.hpp"
int main() { return 0; }
