from persistence import DatasetStore

store: DatasetStore = DatasetStore()
