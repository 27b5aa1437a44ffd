//! String descriptors for bodies, supports, rules, functions and M-sets.
//!
//! The same syntax is used on the command line and inside scenario files.

use radial_orlicz::geometry::{linear_image, ConvexBodySupport, GridBody, LinearMap, StarBody};
use radial_orlicz::integrate::SphericalRule;
use radial_orlicz::madd::{m_set_from_phi, MSet};
use radial_orlicz::orlicz::{parse_function, OrliczFunction, Registered};

use crate::error::{invalid, CliError, CliResult};

fn bad(desc: &str, why: &str) -> CliError {
    CliError::Invalid(format!("descriptor '{desc}': {why}"))
}

fn num(s: &str, desc: &str) -> CliResult<f64> {
    s.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad(desc, &format!("'{s}' is not a number")))
}

fn int(s: &str, desc: &str) -> CliResult<usize> {
    s.trim().parse::<usize>().map_err(|_| bad(desc, &format!("'{s}' is not a nonnegative integer")))
}

fn list(s: &str, desc: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(|x| num(x, desc)).collect()
}

/// `ball:n:r`, `fourier:base[:k:a…]`, `ellipsoid:d1,…,dn`, `grid:path`.
pub fn parse_body(desc: &str) -> CliResult<StarBody> {
    let (kind, rest) = desc.split_once(':').ok_or_else(|| bad(desc, "expected kind:arguments"))?;
    let body = match kind {
        "ball" => {
            let (n, r) = rest.split_once(':').ok_or_else(|| bad(desc, "expected ball:n:r"))?;
            invalid(StarBody::ball(int(n, desc)?, num(r, desc)?), desc)?
        }
        "fourier" => {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() % 2 != 1 {
                return Err(bad(desc, "expected fourier:base followed by k:a pairs"));
            }
            let base = num(parts[0], desc)?;
            let terms = parts[1..]
                .chunks(2)
                .map(|c| {
                    let k = int(c[0], desc)?;
                    let k = u32::try_from(k).map_err(|_| bad(desc, "frequency too large"))?;
                    Ok((k, num(c[1], desc)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            invalid(StarBody::fourier_star(base, &terms), desc)?
        }
        "ellipsoid" => {
            let d = list(rest, desc)?;
            let map = invalid(LinearMap::diagonal(&d), desc)?;
            let ball = invalid(StarBody::ball(d.len(), 1.0), desc)?;
            invalid(linear_image(&ball, &map), desc)?
        }
        "grid" => invalid(GridBody::read(rest), desc)?.to_star_body(),
        _ => return Err(bad(desc, &format!("unknown body kind '{kind}'"))),
    };
    Ok(body.with_label(desc))
}

/// `ball:n:r`, `ellipsoid:d1,…,dn` (semi-axes), `polytope:x,y[,z];…`.
pub fn parse_support(desc: &str) -> CliResult<ConvexBodySupport> {
    let (kind, rest) = desc.split_once(':').ok_or_else(|| bad(desc, "expected kind:arguments"))?;
    let support = match kind {
        "ball" => {
            let (n, r) = rest.split_once(':').ok_or_else(|| bad(desc, "expected ball:n:r"))?;
            invalid(ConvexBodySupport::ball(int(n, desc)?, num(r, desc)?), desc)?
        }
        "ellipsoid" => invalid(ConvexBodySupport::axis_ellipsoid(&list(rest, desc)?), desc)?,
        "polytope" => {
            let points = rest.split(';').map(|p| list(p, desc)).collect::<CliResult<Vec<_>>>()?;
            let n = points.first().map_or(0, Vec::len);
            invalid(ConvexBodySupport::from_vertices(n, &points), desc)?
        }
        _ => return Err(bad(desc, &format!("'{kind}' is not a convex-body descriptor"))),
    };
    Ok(support.with_label(desc))
}

pub fn parse_rule(desc: &str) -> CliResult<SphericalRule> {
    invalid(desc.parse(), desc)
}

pub fn parse_registered(desc: &str, arity: usize, n: usize) -> CliResult<Registered> {
    invalid(parse_function(desc, arity, n), desc)
}

pub fn parse_orlicz(desc: &str, arity: usize, n: usize) -> CliResult<OrliczFunction> {
    invalid(parse_registered(desc, arity, n)?.into_function(), desc)
}

/// `lp-curve:p:res`, `phi:<function>:res`, or a JSON file path, each with
/// an optional `mset:` prefix.
pub fn parse_mset(desc: &str) -> CliResult<MSet> {
    let rest = desc.strip_prefix("mset:").unwrap_or(desc);
    if let Some(args) = rest.strip_prefix("lp-curve:") {
        let (p, res) = args.split_once(':').ok_or_else(|| bad(desc, "expected lp-curve:p:resolution"))?;
        return invalid(MSet::lp_curve(num(p, desc)?, int(res, desc)?), desc);
    }
    if let Some(args) = rest.strip_prefix("phi:") {
        let (f, res) = args.rsplit_once(':').ok_or_else(|| bad(desc, "expected phi:function:resolution"))?;
        let phi = parse_orlicz(f, 2, 2)?;
        return invalid(m_set_from_phi(&phi, int(res, desc)?), desc);
    }
    invalid(MSet::read(std::path::Path::new(rest)), desc)
}
