#pragma once

#define POLYENS_VERSION_MAJOR 0
#define POLYENS_VERSION_MINOR 1
#define POLYENS_VERSION_PATCH 0
#define POLYENS_VERSION_STRING "0.1.0"
