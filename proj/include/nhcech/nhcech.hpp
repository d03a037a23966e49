#pragma once

#include "nhcech/errors.hpp"
#include "nhcech/linalg.hpp"
#include "nhcech/complex.hpp"
#include "nhcech/cech.hpp"
#include "nhcech/diagram.hpp"
#include "nhcech/mayer_vietoris.hpp"
#include "nhcech/bundles.hpp"
#include "nhcech/refinement.hpp"
#include "nhcech/document.hpp"
#include "nhcech/gallery.hpp"
#include "nhcech/report.hpp"
