#include "forge/ground.hpp"
