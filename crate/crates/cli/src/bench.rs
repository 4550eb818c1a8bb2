use std::path::Path;
use std::time::Instant;

use rand::Rng;

use solvcrypt::composite::{self, CompositeKeyPair};
use solvcrypt::groups::{builtin, SemidirectSpec};

use crate::commands::write_out;
use crate::error::CliError;
use crate::Format;

pub struct Options {
    pub sizes: Vec<u32>,
    pub groups: Vec<String>,
    pub trials: usize,
    pub blinding: usize,
    pub sweep: Vec<usize>,
    pub format: Format,
}

struct Row {
    op: String,
    group: String,
    bits: u32,
    mean_ms: f64,
    p95_ms: f64,
}

fn bench_spec(name: &str) -> Result<SemidirectSpec, CliError> {
    match name {
        "Z2" => Ok(SemidirectSpec::direct(vec![2])?),
        "S3" => Ok(builtin::s3_spec()),
        "Z2wrZ2" => Ok(builtin::z2_wr_z2_spec()),
        _ => Err(CliError::Malformed(format!("unknown bench group `{name}` (use Z2, S3, Z2wrZ2)"))),
    }
}

/// Mean and nearest-rank 95th percentile, in milliseconds.
fn summarize(mut ms: Vec<f64>) -> (f64, f64) {
    ms.sort_by(f64::total_cmp);
    let mean = ms.iter().sum::<f64>() / ms.len() as f64;
    let rank = ((0.95 * ms.len() as f64).ceil() as usize).clamp(1, ms.len());
    (mean, ms[rank - 1])
}

fn time<T>(f: impl FnOnce() -> Result<T, CliError>) -> Result<(T, f64), CliError> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_secs_f64() * 1e3))
}

fn bench_group<R: Rng>(
    name: &str,
    bits: u32,
    opts: &Options,
    rng: &mut R,
    rows: &mut Vec<Row>,
) -> Result<(), CliError> {
    let spec = bench_spec(name)?;
    let order = spec.order();
    let mut push = |op: String, samples: Vec<f64>| {
        let (mean_ms, p95_ms) = summarize(samples);
        rows.push(Row { op, group: name.to_string(), bits, mean_ms, p95_ms });
    };
    let mut keygen = Vec::with_capacity(opts.trials);
    let mut kp: Option<CompositeKeyPair> = None;
    for _ in 0..opts.trials {
        let (k, ms) = time(|| Ok(composite::keygen_composite(spec.clone(), bits, opts.blinding, rng)?))?;
        keygen.push(ms);
        kp = Some(k);
    }
    let kp = kp.expect("trials > 0");
    let pk = &kp.public;
    let (mut enc, mut eval, mut dec) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..opts.trials {
        let (h1, h2) = (rng.gen_range(0..order), rng.gen_range(0..order));
        let (c1, ms) = time(|| Ok(pk.encrypt(h1, rng)?))?;
        enc.push(ms);
        let c2 = pk.encrypt(h2, rng)?;
        let (c, ms) = time(|| Ok(pk.eval_multiply(&c1, &c2)?))?;
        eval.push(ms);
        let (h, ms) = time(|| Ok(kp.decrypt(&c)?))?;
        dec.push(ms);
        if h != spec.mul(h1, h2) {
            return Err(CliError::Other(format!("bench decryption mismatch in {name}")));
        }
    }
    push("keygen".into(), keygen);
    push("encrypt".into(), enc);
    push("eval".into(), eval);
    push("decrypt".into(), dec);
    for &s in &opts.sweep {
        let kp_s = kp.with_blinding(s);
        let mut samples = Vec::with_capacity(opts.trials);
        for _ in 0..opts.trials {
            let h = rng.gen_range(0..order);
            samples.push(time(|| Ok(kp_s.public.encrypt(h, rng)?))?.1);
        }
        push(format!("encrypt_s{s}"), samples);
    }
    Ok(())
}

pub fn run<R: Rng>(opts: &Options, out: Option<&Path>, rng: &mut R) -> Result<(), CliError> {
    if opts.trials == 0 {
        return Err(CliError::Malformed("--trials must be positive".into()));
    }
    let mut rows = Vec::new();
    for &bits in &opts.sizes {
        for g in &opts.groups {
            bench_group(g, bits, opts, rng, &mut rows)?;
        }
    }
    let mut text = String::new();
    match opts.format {
        Format::Csv => {
            text.push_str("op,group,bits,mean_ms,p95_ms\n");
            for r in &rows {
                text.push_str(&format!("{},{},{},{:.4},{:.4}\n", r.op, r.group, r.bits, r.mean_ms, r.p95_ms));
            }
        }
        Format::Text => {
            text.push_str(&format!("{:<12} {:<8} {:>6} {:>12} {:>12}\n", "op", "group", "bits", "mean_ms", "p95_ms"));
            for r in &rows {
                text.push_str(&format!(
                    "{:<12} {:<8} {:>6} {:>12.4} {:>12.4}\n",
                    r.op, r.group, r.bits, r.mean_ms, r.p95_ms
                ));
            }
        }
    }
    write_out(out, &text)
}
