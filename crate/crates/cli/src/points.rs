use clap::Args;
use paircorr::pointsets::{write_points, LatticePointSet};

use crate::args::{name, OutArgs, SetArgs};
use crate::output::{emit, provenance};
use crate::Outcome;

#[derive(Debug, Args)]
pub struct PointsArgs {
    #[command(flatten)]
    set: SetArgs,
    #[command(flatten)]
    out: OutArgs,
}

pub fn run(a: PointsArgs) -> anyhow::Result<Outcome> {
    let s = &a.set;
    let set = LatticePointSet::new(s.n, s.radius, s.kind.into(), s.boundary.into())?;
    let cloud = set.points()?;
    let mut meta = provenance("points");
    meta.push("n", s.n)
        .push("R", s.radius)
        .push("kind", name(&s.kind))
        .push("boundary", name(&s.boundary))
        .push("count", cloud.len());
    let mut buf = Vec::new();
    meta.write_comment_header(&mut buf)?;
    write_points(&mut buf, cloud.iter())?;
    emit(a.out.out.as_deref(), &buf)?;
    Ok(Outcome::Pass)
}
