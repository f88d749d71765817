use std::io::Read;
use std::sync::Arc;
use std::time::Duration;

use termbench_core::dataset::{read_split, Split};
use termbench_core::http::{HttpTransport, ReqwestTransport};
use termbench_core::lexical::{
    paired_distance_analysis, pca_project, rowwise_alignment, write_distance_summary, write_pca_points,
    EmbeddingProvider, EmbeddingStore, HttpEmbeddingProvider, LabeledVector, PointClass, StoreProvider, BINARY_MAGIC,
};

use super::{open, pretty_json, render, StageContext};
use crate::config::{env_secret, EMBEDDING_KEY_VAR};
use crate::error::{io, CliError};

fn provider(ctx: &StageContext<'_>) -> Result<Box<dyn EmbeddingProvider>, CliError> {
    let lex = &ctx.cfg.lexicalize;
    if let Some(path) = &lex.store {
        let mut bytes = Vec::new();
        open(path)?.read_to_end(&mut bytes).map_err(io(format!("reading {}", path.display())))?;
        let store = if bytes.starts_with(BINARY_MAGIC) {
            EmbeddingStore::read_binary(bytes.as_slice())?
        } else {
            EmbeddingStore::read_jsonl(bytes.as_slice())?
        };
        return Ok(Box::new(StoreProvider::new(store)));
    }
    let endpoint = lex
        .endpoint
        .as_deref()
        .ok_or_else(|| CliError::Config("lexicalize.store or lexicalize.endpoint must be set".into()))?;
    let transport: Arc<dyn HttpTransport> = Arc::new(ReqwestTransport::new(Duration::from_secs(120))?);
    Ok(Box::new(HttpEmbeddingProvider::new(transport, endpoint, env_secret(EMBEDDING_KEY_VAR))))
}

pub fn run(ctx: &mut StageContext<'_>) -> Result<(), CliError> {
    let pairs = read_split(open(&ctx.layout.split())?)?;
    let provider = provider(ctx)?;
    let mut labeled = Vec::new();
    let mut matched = Vec::new();
    for t in ctx.cfg.inputs.terminologies() {
        let train: Vec<_> = pairs.iter().filter(|p| p.terminology == t && p.split == Split::Train).collect();
        if train.is_empty() {
            continue;
        }
        let terms: Vec<String> = train.iter().map(|p| p.term.clone()).collect();
        let ids: Vec<String> = train.iter().map(|p| p.identifier.clone()).collect();
        let term_vecs = ctx.runtime.block_on(provider.embed(&terms))?;
        let id_vecs = ctx.runtime.block_on(provider.embed(&ids))?;
        let alignment = rowwise_alignment(&term_vecs, &id_vecs)?;
        ctx.emit(&ctx.layout.alignment(t), &pretty_json(&alignment)?)?;

        for ((term, id), (tv, iv)) in terms.iter().zip(&ids).zip(term_vecs.into_iter().zip(id_vecs)) {
            labeled.push(LabeledVector { label: term.clone(), class: PointClass::Term, terminology: t, vector: tv });
            labeled.push(LabeledVector { label: id.clone(), class: PointClass::Identifier, terminology: t, vector: iv });
            matched.push((t, term.clone(), id.clone()));
        }
    }
    if labeled.is_empty() {
        return Err(CliError::Core(termbench_core::Error::Domain("no training pairs to embed".into())));
    }
    let projection = pca_project(&labeled, 2)?;
    let points = render(|buf| write_pca_points(buf, &projection).map_err(Into::into))?;
    ctx.emit(&ctx.layout.pca_points(), &points)?;
    let distances = paired_distance_analysis(&projection, &matched)?;
    let summary = render(|buf| write_distance_summary(buf, &distances).map_err(Into::into))?;
    ctx.emit(&ctx.layout.distances(), &summary)?;

    let meta = serde_json::json!({
        "vectors": labeled.len(),
        "rank": projection.rank,
        "explained_variance": projection.explained_variance,
        "eigenvalues": projection.eigenvalues,
        "components": projection.components,
        "paired_mean": distances.paired_mean,
        "nonpaired_mean": distances.nonpaired_mean,
    });
    ctx.emit(&ctx.layout.pca(), &pretty_json(&meta)?)?;
    ctx.detail("vectors", labeled.len());
    Ok(())
}
