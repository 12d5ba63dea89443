#pragma once

#define NBDE_VERSION_MAJOR 0
#define NBDE_VERSION_MINOR 1
#define NBDE_VERSION_PATCH 0
#define NBDE_VERSION_STRING "0.1.0"
