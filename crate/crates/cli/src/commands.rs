use std::io::Write;

use anyhow::{bail, Context, Result};
use lsys_complexity::{
    analyze as analyze_bits, classify, entropy_word_length, flag_anomalies, grammar_stats,
    linguistic_complexity, radius_traced, system_from_grammar, topological_entropy,
    tree_to_bracketed, AnalysisConfig64, BitTree, EncodingTag, GenFunSystem64, LcBreakdown64,
    Measures, WindowPlan,
};
use serde_json::json;

use crate::input::{encode_text, load_stream, load_window, read_text};
use crate::output::{sink, write_csv, write_json};
use crate::{
    AnalyzeArgs, BaselinesArgs, ComplexityArgs, EncodeArgs, GrammarArgs, Measure, SeriesFormat,
    TableFormat, WindowInput,
};

fn window_tree(w: &WindowInput) -> Result<BitTree> {
    let bits = load_window(w.bits.as_deref(), w.hex.as_deref(), w.input.as_deref())?;
    Ok(BitTree::new(bits)?)
}

pub fn encode(args: EncodeArgs) -> Result<()> {
    let text = read_text(&args.input)?;
    let encoded = encode_text(&text, args.encoding.into(), &args.encoding_args)?;
    let mut out = sink(args.output.as_deref())?;
    if args.ascii {
        writeln!(out, "{}", encoded.bits)?;
    } else {
        encoded.header.write(&encoded.bits, &mut out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn grammar(args: GrammarArgs) -> Result<()> {
    let tree = window_tree(&args.window)?;
    let g = classify(&tree, args.iso_depth);
    let mut out = sink(None)?;
    match args.format {
        TableFormat::Text => {
            if args.bracketed {
                writeln!(out, "{}", tree_to_bracketed(&tree).as_str())?;
            }
            write!(out, "{}", g.to_table())?;
        }
        TableFormat::Json => {
            let stats = grammar_stats(&g);
            let mut doc = json!({
                "window_bits": tree.leaf_count(),
                "n": stats.n,
                "node_total": stats.node_total,
                "grammar": g,
            });
            if args.bracketed {
                doc["bracketed"] = json!(tree_to_bracketed(&tree).as_str());
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn complexity(args: ComplexityArgs) -> Result<()> {
    let tree = window_tree(&args.window)?;
    let g = classify(&tree, args.solver.iso_depth);
    let system: GenFunSystem64 = system_from_grammar(&g, args.solver.k_mode.into());
    let search = radius_traced(&system, &args.solver.params())?;
    let r = &search.result;
    let mut out = sink(None)?;
    match args.format {
        TableFormat::Text => {
            writeln!(out, "window_bits = {}", tree.leaf_count())?;
            writeln!(out, "classes = {}", system.len())?;
            writeln!(out, "radius = {:?}", r.radius)?;
            writeln!(out, "k0 = {:?}", r.k0)?;
            writeln!(out, "converged_at_one = {}", r.converged_at_one)?;
            if args.system {
                for line in system.describe() {
                    writeln!(out, "{line}")?;
                }
            }
            if args.trace {
                writeln!(out, "step z converged iterations")?;
                for (i, p) in search.trace.iter().enumerate() {
                    writeln!(out, "{i} {:?} {} {}", p.z, p.converged, p.iterations)?;
                }
            }
        }
        TableFormat::Json => {
            let mut doc = json!({
                "window_bits": tree.leaf_count(),
                "classes": system.len(),
                "k_mode": system.k_mode(),
                "result": r,
            });
            if args.system {
                doc["system"] = json!(system.describe());
            }
            if args.trace {
                doc["trace"] = json!(search.trace);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn baselines(args: BaselinesArgs) -> Result<()> {
    let text = match (&args.sequence, &args.file) {
        (Some(s), None) => s.clone(),
        (None, Some(path)) => read_text(path)?.trim().to_owned(),
        _ => bail!("give a symbol string or --file"),
    };
    let symbols: Vec<char> = text.chars().collect();
    let mut distinct = symbols.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let k = args.k.unwrap_or(distinct.len().max(2));

    let lc: LcBreakdown64 = linguistic_complexity(&symbols, k)?;
    let te = match topological_entropy::<_, f64>(&symbols, k) {
        Ok(te) => Some(te),
        Err(e) => {
            eprintln!("warning: topological entropy undefined: {e}");
            None
        }
    };
    let word_length = entropy_word_length(symbols.len(), k);
    let mut out = sink(None)?;
    match args.format {
        TableFormat::Text => {
            writeln!(out, "n = {}", symbols.len())?;
            writeln!(out, "k = {k}")?;
            writeln!(out, "distinct_substrings = {}", lc.actual)?;
            writeln!(out, "maximal_substrings = {}", lc.maximal)?;
            writeln!(out, "lc = {:?}", lc.lc)?;
            if let (Some(te), Some(l)) = (te, word_length) {
                writeln!(out, "te_word_length = {l}")?;
                writeln!(out, "te = {te:?}")?;
            }
        }
        TableFormat::Json => {
            let doc = json!({
                "n": symbols.len(),
                "k": k,
                "lc": lc,
                "te_word_length": te.and(word_length),
                "te": te,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn analyze(args: AnalyzeArgs) -> Result<()> {
    let tag: EncodingTag = args.encoding.into();
    let bits = load_stream(&args.input, tag, &args.encoding_args)?;
    let measures = Measures {
        k0: args.measures.contains(&Measure::K0),
        te: args.measures.contains(&Measure::Te),
        lc: args.measures.contains(&Measure::Lc),
    };
    let config = AnalysisConfig64 {
        plan: WindowPlan {
            window_bits: args.window,
            stride_bits: args.stride.unwrap_or(args.window),
        },
        measures,
        iso_depth: args.solver.iso_depth,
        k_mode: args.solver.k_mode.into(),
        params: args.solver.params(),
    };
    if args.tau.is_nan() || args.tau <= 0.0 {
        bail!("--tau must be positive, got {}", args.tau);
    }
    let mut series = analyze_bits(&bits, tag, &config)?;
    if series.records.is_empty() {
        eprintln!(
            "warning: input has {} bits, fewer than one {}-bit window; the series is empty",
            bits.len(),
            args.window
        );
    } else {
        series = flag_anomalies(series, args.tau)?;
        if series.dropped_tail_bits > 0 {
            eprintln!(
                "note: {} trailing bits do not fill a window and were ignored",
                series.dropped_tail_bits
            );
        }
    }
    let out = sink(args.output.as_deref())?;
    match args.format {
        SeriesFormat::Csv => write_csv(&series, out),
        SeriesFormat::Json => write_json(&series, out),
    }
    .context("writing the series")
}
