#pragma once

#include "indexcode/catalog.hpp"
#include "indexcode/codes.hpp"
#include "indexcode/error.hpp"
#include "indexcode/field.hpp"
#include "indexcode/gencode.hpp"
#include "indexcode/graph.hpp"
#include "indexcode/instance.hpp"
#include "indexcode/lincode.hpp"
#include "indexcode/search.hpp"
#include "indexcode/properties.hpp"
#include "indexcode/repro.hpp"
