#pragma once

#include "largesol/absorption.hpp"
#include "largesol/curvature_field.hpp"
#include "largesol/cut_graph.hpp"
#include "largesol/errors.hpp"
#include "largesol/geometry.hpp"
#include "largesol/io.hpp"
#include "largesol/maxflow.hpp"
#include "largesol/nonlinearity.hpp"
#include "largesol/p_radial.hpp"
#include "largesol/parallel.hpp"
#include "largesol/prescribed_curvature.hpp"
#include "largesol/raster.hpp"
#include "largesol/verify.hpp"
