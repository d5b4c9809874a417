//! Every example must keep running.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }

        #[test]
        fn $name() {
            $name::run().unwrap();
        }
    };
}

example!(ingest_table_one);
example!(grid_tessellation);
example!(build_twg);
example!(betweenness_hotspots);
example!(louvain_communities);
example!(community_speeds);
example!(synthetic_match);
example!(render_heatmaps);
example!(full_pipeline);
