#ifndef AFV_AFV_HPP
#define AFV_AFV_HPP

#include "afv/afop.hpp"
#include "afv/error.hpp"
#include "afv/geom.hpp"
#include "afv/inequality.hpp"
#include "afv/matrix.hpp"
#include "afv/mixdisc.hpp"
#include "afv/mixvol.hpp"
#include "afv/random.hpp"
#include "afv/rational.hpp"
#include "afv/sampling.hpp"
#include "afv/spectral.hpp"

#endif  // AFV_AFV_HPP
