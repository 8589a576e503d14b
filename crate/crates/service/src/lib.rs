//! HTTP front end for the adrcode encoder and the human review loop.
//!
//! | route | purpose |
//! |---|---|
//! | `POST /encode` | encode `{text}`, display-capped, with token spans and negation warnings |
//! | `POST /sessions` | open a review session on `{text}` |
//! | `GET /sessions/{id}` | the session as stored |
//! | `POST /sessions/{id}/decisions` | accept, reject or replace a displayed term |
//! | `POST /sessions/{id}/validate` | compute the final set and freeze the session |
//! | `GET /terms?q=&limit=` | word-prefix term search for replacements |
//! | `GET /health` | dictionary version and counts |

pub mod api;
pub mod config;
pub mod negation;
pub mod search;
pub mod session;
pub mod store;

use std::sync::Arc;

pub use api::{router, AppState};
pub use config::{ConfigError, ServiceConfig};
pub use store::{Store, StoreError};

use negation::NegationScanner;

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot open data directory: {0}")]
    Store(#[from] StoreError),
    #[error("cannot listen: {0}")]
    Io(#[from] std::io::Error),
}

/// Load the dictionary and open the session store described by `config`.
pub fn build_state(config: &ServiceConfig) -> Result<AppState, ServeError> {
    let bundle = config.bundle()?.map(Arc::new);
    let store = match &config.data_dir {
        Some(dir) => Store::open(dir)?,
        None => Store::in_memory(),
    };
    Ok(AppState {
        bundle,
        encoder: config.encoder_config(),
        negations: Arc::new(NegationScanner::new(&config.negation_words)),
        store: Arc::new(store),
    })
}

/// Serve on `listener` until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> Result<(), ServeError> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
