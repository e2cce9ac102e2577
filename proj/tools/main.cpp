#include "forge/ground.hpp"
int main(){return 0;}
