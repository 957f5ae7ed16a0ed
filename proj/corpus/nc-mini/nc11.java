public class Answer {
    public static int classify(int value) {
        int bucket = 0;
        if (value < 0) {
            bucket = 0;
        } else {
            if (value < 10) {
                bucket = 1;
            } else {
                bucket = 2;
            }
        }
        return bucket;
    }
}
