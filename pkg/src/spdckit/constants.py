"""Physical constants and unit conventions.

Wavelengths are vacuum values in nm at API boundaries and in um inside
propagation-constant formulas (k in rad/um).  Times are in ps.  Delay to
free-space path: 1 mm of path corresponds to PS_PER_MM ps.
"""

C_UM_PER_PS = 299.792458          # speed of light, um/ps
C_NM_PER_PS = 299792.458          # speed of light, nm/ps
PS_PER_MM = 1.0e9 / 299792458.0   # free-space delay per mm of path, ~3.3356 ps

TWO_PI = 6.283185307179586
